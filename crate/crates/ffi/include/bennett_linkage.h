#ifndef BENNETT_LINKAGE_H
#define BENNETT_LINKAGE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BlStatus {
  BL_STATUS_OK = 0,
  BL_STATUS_NULL_POINTER = 1,
  BL_STATUS_INVALID_UTF8 = 2,
  BL_STATUS_INVALID_SPEC = 3,
  BL_STATUS_INVALID_ARGUMENT = 4,
  BL_STATUS_DEGENERATE_GEOMETRY = 5,
  BL_STATUS_CLOSURE_FAILURE = 6,
  BL_STATUS_COLLAPSED_POSE = 7,
  BL_STATUS_BUFFER_TOO_SMALL = 8,
  BL_STATUS_PANIC = 9,
} BlStatus;

/**
 * A validated spherical or spatial 8-bar.
 */
typedef struct BlLinkage BlLinkage;

/**
 * One assembled pose of a [`BlLinkage`].
 */
typedef struct BlPose BlPose;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` as a
 * NUL-terminated string, truncating to fit. Returns the full message
 * length in bytes, without the terminator; 0 when there is no error.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes of writes.
 */
size_t bl_last_error_message(char *buf, size_t len);

/**
 * Transmission coefficient `c21` of a spherical isogram, so that
 * `tan(phi2/2) = c21 tan(phi1/2)`. `branch` is a [`BlBranch`] value.
 *
 * # Safety
 * `out` must be null or point to a writable `double`.
 */
enum BlStatus bl_transmission_coefficient(double alpha, double beta, int32_t branch, double *out);

/**
 * Arm angle at B for arm angle `phi1` at A, in (-pi, pi]. NaN in, NaN out.
 */
double bl_coupled_angle(double c21, double phi1);

/**
 * Parses a TOML spec of kind `spherical8` or `spatial8` and builds the
 * linkage. On success `*out` owns a new handle.
 *
 * # Safety
 * `toml` must be null or a NUL-terminated string; `out` must be null or
 * point to writable storage for one pointer.
 */
enum BlStatus bl_linkage_from_toml(const char *toml, struct BlLinkage **out);

/**
 * # Safety
 * `linkage` must be null or a handle from [`bl_linkage_from_toml`] not
 * yet freed.
 */
void bl_linkage_free(struct BlLinkage *linkage);

/**
 * 1 for a spatial linkage, 0 for a spherical one or a null handle.
 *
 * # Safety
 * `linkage` must be null or a live handle.
 */
int32_t bl_linkage_is_spatial(const struct BlLinkage *linkage);

/**
 * Assembles the pose with driving angle `phi1`. Aligned poses are valid
 * results, see [`bl_pose_is_collapsed`].
 *
 * # Safety
 * `linkage` must be null or a live handle; `out` must be null or point to
 * writable storage for one pointer.
 */
enum BlStatus bl_linkage_assemble(const struct BlLinkage *linkage,
                                  double phi1,
                                  struct BlPose **out);

/**
 * # Safety
 * `pose` must be null or a handle from [`bl_linkage_assemble`] not yet
 * freed.
 */
void bl_pose_free(struct BlPose *pose);

/**
 * 1 when every bar lies on the base circle or line, else 0 (also for null).
 *
 * # Safety
 * `pose` must be null or a live handle.
 */
int32_t bl_pose_is_collapsed(const struct BlPose *pose);

/**
 * Number of doubles [`bl_pose_joint_coordinates`] writes: 36 for a
 * spherical pose (12 unit vectors), 72 for a spatial one (12 lines as
 * point then direction). 0 for null.
 *
 * # Safety
 * `pose` must be null or a live handle.
 */
size_t bl_pose_coordinate_count(const struct BlPose *pose);

/**
 * Writes the joint coordinates in the order R01, R02, R03, R10, R12, R13,
 * R20, R21, R23, R30, R31, R32.
 *
 * # Safety
 * `pose` must be null or a live handle; `buf` must be null or valid for
 * `len` doubles of writes.
 */
enum BlStatus bl_pose_joint_coordinates(const struct BlPose *pose, double *buf, size_t len);

/**
 * Largest residual over every check that applies to the pose: the
 * symmetry statements for regular poses, the alignment check for
 * collapsed ones.
 *
 * # Safety
 * `pose` must be null or a live handle; `out` must be null or point to a
 * writable `double`.
 */
enum BlStatus bl_pose_max_residual(const struct BlPose *pose, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BENNETT_LINKAGE_H */

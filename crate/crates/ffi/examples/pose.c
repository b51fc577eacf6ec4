/* Build: cargo build -p bennett-linkage-ffi --release
 *        cc examples/pose.c -Iinclude ../../target/release/libbennett_linkage_ffi.a -lm -lpthread -ldl -o pose
 */
#include <stdio.h>
#include "bennett_linkage.h"

static const char *SPEC =
    "schema_version = 1\n"
    "kind = \"spherical8\"\n"
    "u1 = 0.0\nu2 = 1.0471975511965976\nu3 = 1.8325957145940461\n"
    "beta1 = 0.7853981633974483\nbeta2 = 0.6283185307179586\n"
    "branch1 = \"plus\"\nbranch2 = \"plus\"\nderive = true\n";

int main(void) {
    BlLinkage *lk = NULL;
    BlPose *pose = NULL;
    char msg[256];
    if (bl_linkage_from_toml(SPEC, &lk) != BL_STATUS_OK) {
        bl_last_error_message(msg, sizeof msg);
        fprintf(stderr, "%s\n", msg);
        return 1;
    }
    for (int k = -3; k <= 3; k++) {
        double phi = 0.9 * k, r = 0.0, xs[36];
        if (bl_linkage_assemble(lk, phi, &pose) != BL_STATUS_OK) {
            bl_last_error_message(msg, sizeof msg);
            fprintf(stderr, "phi1 %+.2f: %s\n", phi, msg);
            continue;
        }
        bl_pose_joint_coordinates(pose, xs, 36);
        bl_pose_max_residual(pose, &r);
        printf("phi1 %+.2f collapsed %d R10 (%+.6f %+.6f %+.6f) residual %.1e\n", phi, bl_pose_is_collapsed(pose), xs[9],
               xs[10], xs[11], r);
        bl_pose_free(pose);
    }
    bl_linkage_free(lk);
    return 0;
}

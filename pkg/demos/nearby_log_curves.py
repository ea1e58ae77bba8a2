"""Track continuous logarithms along three curves and write their angle trajectories.

Writes curve_subgroup.csv, curve_loop.csv and curve_crossing.csv in the
current directory (columns t, theta_1, ..., dist_to_locus, residual).
"""

from skewexp.curves import constant_frame_curve, locus_crossing_curve, subgroup_curve
from skewexp.nearlog import angle_trajectory, track_curve, write_trajectory_csv

cases = {
    "subgroup": subgroup_curve(4, seed=110)[:2],
    "loop": constant_frame_curve(4, seed=110)[:2],
    "crossing": locus_crossing_curve()[:2],
}
for name, (curve, A0) in cases.items():
    path = track_curve(curve, A0)
    traj = angle_trajectory(path)
    write_trajectory_csv(path, f"curve_{name}.csv")
    print(
        f"{name:9s} samples={len(path):3d} "
        f"theta(0)={traj[0, 1:].round(3)} theta(1)={traj[-1, 1:].round(3)} "
        f"min dist={min(p.dist for p in path.samples):.1e} crossings={path.crossings}"
    )

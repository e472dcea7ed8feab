"""Specular reflection and the half-vector steering normal.

Walks through the two geometric primitives everything else builds on:
mirror reflection about a unit normal, and the virtual normal that makes
a ceiling subunit bounce a specific user ray onto the receiver.
"""

import math

from pwesim import Vec2, angle_between, optimal_normal, reflect


def main() -> None:
    print("== plain mirror reflection ==")
    incident = Vec2(0.6, -0.8)
    floor_normal = Vec2(0.0, 1.0)
    r = reflect(incident, floor_normal)
    print(f"incident {incident} about floor normal {floor_normal}")
    print(f"  -> {r}  (x kept, y flipped)")

    print()
    print("== steering normal for one subunit ==")
    hsf = Vec2(0.0, 3.0)     # ceiling point straight above the user
    user = Vec2(0.0, 1.0)
    target = Vec2(3.6, 2.4)  # receive aperture center down the corridor
    n = optimal_normal(hsf, user, target)
    print(f"user {user} -> panel {hsf} -> target {target}")
    print(f"virtual normal n = ({n.x:.6f}, {n.y:.6f}), |n| = {n.norm:.12f}")

    incident = (hsf - user).normalized()
    desired = (target - hsf).normalized()
    got = reflect(incident, n)
    err = angle_between(got, desired)
    print(f"reflect(incident, n) vs panel->target direction: {err:.3e} rad")

    print()
    print("== the same normal, as a tilt ==")
    tilt = math.degrees(math.atan2(n.x, -n.y))
    print(f"n leans {tilt:.2f} degrees off straight-down, toward the receiver")
    mirror = Vec2(0.0, -1.0)
    bounced = reflect(incident, mirror)
    print(f"an untilted mirror would send the ray to {bounced} instead,")
    print("straight back at the user")


if __name__ == "__main__":
    main()

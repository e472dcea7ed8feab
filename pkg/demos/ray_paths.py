"""Trace a small fan and print (optionally draw) every ray path.

Runs the static schedule twice: once with the user exactly where the panel
expects them, once displaced by 10 cm. The first run lands every ray in the
aperture; the second shows the beam landing where the user used to be.
"""

from pwesim import (Captured, ExperimentConfig, Static, TracerConfig,
                    build_schedule, materialize_normals, received_power)

N_RAYS = 9


def describe(tag: str, outcome) -> None:
    print(f"-- {tag} --")
    for k, rec in enumerate(outcome.per_ray_records):
        fate = type(rec).__name__.lower()
        pts = " -> ".join(f"({p.x:.2f}, {p.y:.2f})" for p in rec.path)
        extra = f", {rec.power:.4f} W" if isinstance(rec, Captured) else ""
        print(f"ray {k}: {fate}{extra}: {pts}")
    print(f"captured {outcome.captured_power:.4f} W, "
          f"escaped {outcome.escaped_power:.4f} W, "
          f"terminated {outcome.terminated_power:.4f} W")


def main() -> None:
    cfg = ExperimentConfig()
    scene = cfg.scene()
    sch = build_schedule(Static(), scene.ceiling.subunit_count - 1,
                         250, cfg.tx_step)
    panel = materialize_normals(sch, scene)
    tracer = TracerConfig(n_rays=N_RAYS, max_bounces=4, record_paths=True)

    outcomes = {}
    for d in (0.0, 0.1):
        outcomes[d] = received_power(scene, panel, d, tracer, total_power=0.1)
        describe(f"static schedule, dislocation {d} m", outcomes[d])
        print()

    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed, skipping the figure")
        return

    fig, axes = plt.subplots(1, 2, figsize=(11, 4), sharey=True)
    for ax, (d, out) in zip(axes, outcomes.items()):
        ax.axhline(0.0, color="0.3")
        ax.axhline(scene.ceiling_height, color="0.3")
        circle = plt.Circle((scene.rx_aperture.center.x,
                             scene.rx_aperture.center.y),
                            scene.rx_aperture.radius, color="tab:green",
                            fill=False, lw=2)
        ax.add_patch(circle)
        for rec in out.per_ray_records:
            xs = [p.x for p in rec.path]
            ys = [p.y for p in rec.path]
            color = "tab:blue" if isinstance(rec, Captured) else "tab:red"
            ax.plot(xs, ys, color=color, lw=0.9, alpha=0.8)
        ax.set_title(f"dislocation {d} m")
        ax.set_xlabel("x [m]")
        ax.set_xlim(scene.corridor_x_min - 0.2, scene.corridor_x_max + 0.2)
    axes[0].set_ylabel("y [m]")
    fig.tight_layout()
    fig.savefig("ray_paths.png", dpi=130)
    print("wrote ray_paths.png (blue = captured, red = lost)")


if __name__ == "__main__":
    main()

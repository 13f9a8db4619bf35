// Scratch probe for crossover behavior of the figure presets.

use quditmem::analysis::{find_crossover, mu_grid, ChannelSpec, Crossing, CurveSpec};

fn mu_of(ch: &ChannelSpec, a: CurveSpec, b: CurveSpec) -> Option<f64> {
    let grid: Vec<f64> = mu_grid(201);
    match find_crossover(ch, a, b, &grid).unwrap().crossing {
        Crossing::Interior { mu, .. } => Some(mu),
        other => {
            println!("  {:?} vs {:?}: {:?}", a, b, other);
            None
        }
    }
}

fn main() {
    let n = |x: f64| 1.0 / x.sqrt();

    for (name, ch, curves) in [
        (
            "fig1 qc p=0.15",
            ChannelSpec::QuasiClassical { d: 4, p: 0.15 },
            vec![
                CurveSpec::Alpha { cos2: n(1.25) },
                CurveSpec::Alpha { cos2: n(2.0) },
            ],
        ),
        (
            "fig2 qc p=0.2 km",
            ChannelSpec::QuasiClassical { d: 4, p: 0.2 },
            vec![
                CurveSpec::Km { cos2: n(2.0) },
                CurveSpec::Km { cos2: n(4.0) },
            ],
        ),
        (
            "fig2ch alpha (same channel)",
            ChannelSpec::QuasiClassical { d: 4, p: 0.2 },
            vec![
                CurveSpec::Alpha { cos2: n(1.25) },
                CurveSpec::Alpha { cos2: n(2.0) },
            ],
        ),
        (
            "fig3 dep p=0.7 alpha",
            ChannelSpec::Depolarizing { d: 4, p: 0.7 },
            vec![
                CurveSpec::Alpha { cos2: n(1.25) },
                CurveSpec::Alpha { cos2: n(2.0) },
            ],
        ),
        (
            "fig4 dep p=0.7 km",
            ChannelSpec::Depolarizing { d: 4, p: 0.7 },
            vec![
                CurveSpec::Km { cos2: n(2.0) },
                CurveSpec::Km { cos2: n(5.0) },
            ],
        ),
    ] {
        println!("{name}");
        let base = mu_of(&ch, CurveSpec::MaxEnt, CurveSpec::Product).unwrap();
        println!("  maxent/product mu_t = {base:.9}");
        for c in curves {
            let vs_prod = mu_of(&ch, c, CurveSpec::Product);
            let vs_me = mu_of(&ch, c, CurveSpec::MaxEnt);
            if let (Some(a), Some(b)) = (vs_prod, vs_me) {
                println!(
                    "  {:?}: vs_prod {a:.9} (d={:+.2e})  vs_maxent {b:.9} (d={:+.2e})",
                    c,
                    a - base,
                    b - base
                );
            }
        }
    }

    // fig5 dominance probe
    let ch = ChannelSpec::HighError { d: 4 };
    let grid: Vec<f64> = mu_grid(201);
    let mut bad = 0;
    for &mu in grid.iter().skip(1) {
        let vals: Vec<f64> = (1..=4)
            .map(|k| CurveSpec::KSupport { k }.eval(&ch, mu).unwrap())
            .collect();
        for w in vals.windows(2) {
            if w[0] < w[1] - 1e-12 {
                bad += 1;
            }
        }
    }
    println!("fig5 ordering violations: {bad}");
    let at1: Vec<f64> = (1..=4)
        .map(|k| CurveSpec::KSupport { k }.eval(&ch, 1.0).unwrap())
        .collect();
    println!("fig5 at mu=1: {at1:?}");
}

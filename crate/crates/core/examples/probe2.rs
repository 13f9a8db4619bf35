// Oracle confirmation of the curve ordering near the fig1 crossover.

use quditmem::analysis::{ChannelSpec, CurveSpec};
use quditmem::noise::{CorrelatedChannel, PauliProbTable};
use quditmem::oracle::{holevo_mutual_info, EnsembleSpec, StateFamily};
use quditmem::states::alpha_from_cos2;
use quditmem::QuditDim;

fn main() {
    let d = QuditDim::new(4).unwrap();
    let p = 0.15;
    let ch_spec = ChannelSpec::QuasiClassical { d: 4, p };
    let table = PauliProbTable::<f64>::quasi_classical(d, p).unwrap();
    let cos2_a1 = 1.0 / 1.25f64.sqrt();

    for mu in [0.45, 0.46, 0.50, 0.55] {
        let ch = CorrelatedChannel::new(table, mu).unwrap();
        let me = holevo_mutual_info(&ch, &EnsembleSpec::new(d, StateFamily::MaxEntangledBasis))
            .unwrap()
            .value;
        let pro = holevo_mutual_info(&ch, &EnsembleSpec::new(d, StateFamily::ProductBasis))
            .unwrap()
            .value;
        let a1 = holevo_mutual_info(
            &ch,
            &EnsembleSpec::new(d, StateFamily::Alpha(alpha_from_cos2(cos2_a1))),
        )
        .unwrap()
        .value;
        let c_me = CurveSpec::MaxEnt.eval(&ch_spec, mu).unwrap();
        let c_pro = CurveSpec::Product.eval(&ch_spec, mu).unwrap();
        let c_a1 = CurveSpec::Alpha { cos2: cos2_a1 }.eval(&ch_spec, mu).unwrap();
        println!(
            "mu={mu:.2}: oracle me={me:.9} pro={pro:.9} a1={a1:.9} | closed deltas {:.1e} {:.1e} {:.1e} | me>a1: {}",
            (me - c_me).abs(),
            (pro - c_pro).abs(),
            (a1 - c_a1).abs(),
            me > a1
        );
    }
}

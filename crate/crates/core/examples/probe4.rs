// Twirl composition identity at d = 3 where the digit-difference and
// phase-gradient sectors genuinely differ.

use quditmem::noise::{CorrelatedChannel, PauliProbTable};
use quditmem::oracle::{apply_channel, twirl, DensityMatrix};
use quditmem::states::max_entangled;
use quditmem::{CMat64, QuditDim};

fn main() {
    let d = QuditDim::new(3).unwrap();
    let table = PauliProbTable::<f64>::quasi_classical(d, 0.2).unwrap();
    // A state with a coherence whose digit differences are (1,2,0): total
    // phase gradient 0 mod 3 but not sector-constant.
    let a = max_entangled::<f64>(d, &[0, 0], 0).unwrap();
    let b = max_entangled::<f64>(d, &[1, 2], 0).unwrap();
    let mix = (a.amplitudes() + b.amplitudes()).map(|z| z.unscale(2f64.sqrt()));
    let rho = DensityMatrix::new(d, &mix * mix.adjoint()).unwrap();
    for mu in [0.0, 0.5, 1.0] {
        let ch = CorrelatedChannel::new(table, mu).unwrap();
        let direct = apply_channel(&ch, &rho).unwrap();
        let composed = apply_channel(&ch, &twirl(&rho)).unwrap();
        let diff: CMat64 = direct.matrix() - composed.matrix();
        println!("mu={mu}: |E(rho) - E(F(rho))| = {:.3e}", diff.norm());
    }
}

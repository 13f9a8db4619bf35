use quditmem::noise::{CorrelatedChannel, PauliProbTable};
use quditmem::oracle::{apply_channel, eigenvalues_desc, DensityMatrix};
use quditmem::states::{alpha_from_cos2, alpha_state};
use quditmem::QuditDim;
use nalgebra::SymmetricEigen;

fn main() {
    let d = QuditDim::new(4).unwrap();
    let alpha = alpha_from_cos2(1.0 / 2f64.sqrt());
    let table = PauliProbTable::<f64>::quasi_classical(d, 0.15).unwrap();
    for mu in [0.0, 0.5, 1.0] {
        let ch = CorrelatedChannel::new(table, mu).unwrap();
        let rho = alpha_state::<f64>(d, alpha).unwrap().to_density();
        let out = apply_channel(&ch, &rho).unwrap();
        let mixed = apply_channel(&ch, &DensityMatrix::maximally_mixed(d)).unwrap();
        for (name, m) in [("out", &out), ("mixed", &mixed)] {
            let finite = m.matrix().iter().all(|z| z.re.is_finite() && z.im.is_finite());
            let eig = SymmetricEigen::try_new(m.matrix().clone(), f64::EPSILON, 0);
            let nan_eigs = eig
                .as_ref()
                .map(|e| e.eigenvalues.iter().filter(|x| !x.is_finite()).count());
            println!("mu={mu} {name}: entries finite={finite} nan_eigs={nan_eigs:?}");
            match eigenvalues_desc(m) {
                Ok(_) => println!("  eigenvalues_desc ok"),
                Err(e) => println!("  err: {e}"),
            }
        }
    }
}

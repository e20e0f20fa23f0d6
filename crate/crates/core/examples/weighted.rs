//! The weighted couple (ℓ₂(w⁻¹), ℓ₂(w)): linear differentials and the
//! spaces Z₂(w) and Z_{ℓ₂(log w)}(w).

use twistlab::seq::WeightSeq;
use twistlab::twisted::Twisted2;
use twistlab::weighted::{
    membership, triviality_defect, weighted_omega, weighted_selector_composition,
    weighted_selector_composition_numeric, WeightedCouple, WeightedLevel, WeightedSpace,
    WeightedValue,
};
use twistlab::SeqVector;

fn main() -> twistlab::Result<()> {
    let c = WeightedCouple::new(WeightSeq::from_fn(6, |n| 1.0 / ((n + 2) as f64).ln())?);
    println!("log w = {:?}", c.log_weights());
    let x = SeqVector::new(vec![1.0, -0.5, 0.25, 2.0, 0.0, 1.0])?;
    let y = SeqVector::new(vec![0.0, 1.0, 1.0, -1.0, 3.0, 0.5])?;

    for level in [WeightedLevel::Om10, WeightedLevel::Om21_0, WeightedLevel::Om10Inverse] {
        println!("{:<12} {:?}", level.name(), weighted_omega(&c, level, &WeightedValue::Vector(x.clone()))?);
    }
    let pair = WeightedValue::Pair(Twisted2::new(y.clone(), x.clone())?);
    println!("{:<12} {:?}", "om2_10", weighted_omega(&c, WeightedLevel::Om2_10, &pair)?);

    let closed = weighted_selector_composition(&c, &y, &x)?;
    let numeric = weighted_selector_composition_numeric(&c, &y, &x, 1e-3)?;
    println!("½W″(1/2) closed form vs numeric: {:.2e}", closed.max_abs_diff(&numeric)?);

    for level in [WeightedLevel::Om10, WeightedLevel::Om21_0, WeightedLevel::Om2_10] {
        println!("{} additivity defect: {:.2e}", level.name(), triviality_defect(&c, level, 100, 1)?);
    }

    println!("\n      n   ‖x‖₂      ‖(0,x)‖_Z₂(w)");
    for k in [6, 10, 14, 18] {
        let n = 1usize << k;
        let c = WeightedCouple::new(WeightSeq::from_fn(n, |j| ((j + 1) as f64).powf(-0.25))?);
        let x = SeqVector::new((1..=n).map(|j| (j as f64).powf(-0.5) / ((j + 1) as f64).ln()).collect())?;
        let v = WeightedValue::Pair(Twisted2::new(SeqVector::zeros(n), x.clone())?);
        let m = membership(&c, WeightedSpace::Z2w, &v, f64::INFINITY)?;
        println!("{n:>7}   {:.6}  {:.6}", x.norm2(), m.norm);
    }
    Ok(())
}

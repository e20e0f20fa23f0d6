//! The extremal selector on the strip and its Taylor coefficients at 1/2.

use twistlab::calderon::{
    conformal_constant, extremal_selector, numeric_derivative, selector_derivative,
    ConformalChoice, StripPoint,
};
use twistlab::seq::lp_norm;
use twistlab::SeqVector;

fn main() -> twistlab::Result<()> {
    let x = SeqVector::new(vec![3.0, -4.0, 0.5, 0.0])?;
    println!("x = {:?}, ‖x‖₂ = {}", x.as_slice(), x.norm2());

    for t in [-2.0, 0.0, 1.5] {
        let left = extremal_selector(&x, StripPoint::left(t))?.moduli().norm_inf();
        let right = lp_norm(&extremal_selector(&x, StripPoint::right(t))?.moduli(), 1.0)?;
        println!("t = {t:>4}: ‖Bx(it)‖∞ = {left:.12}, ‖Bx(1+it)‖₁ = {right:.12}");
    }

    let om10 = selector_derivative(&x, 1)?;
    let num1 = numeric_derivative(&x, 1, 1e-3)?;
    println!("Ω₁,₀x            = {:?}", om10.as_slice());
    println!("finite diff.     = {:?}", num1.as_slice());
    let om20 = selector_derivative(&x, 2)?;
    let num2 = numeric_derivative(&x, 2, 1e-3)?.scale(0.5);
    println!("½(Bx)″(1/2)      = {:?}", om20.as_slice());
    println!("finite diff. / 2 = {:?}", num2.as_slice());

    let c = conformal_constant(ConformalChoice::SymmetricStrip);
    println!("φ′(1/2) = {:.12}, d = {:.3e}", c.derivative, c.d.norm());
    Ok(())
}

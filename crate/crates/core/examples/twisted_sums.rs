//! Quasi-norms of Z₂ and Z₃, the Orlicz corners inside Z₃, and the twisted pairings.

use twistlab::experiments::{omega10_defect, power_family};
use twistlab::orlicz::{luxemburg_norm, OrliczFunction};
use twistlab::twisted::{
    domain_norm, omega21_0, subspace_norm, u2_pairing, u3_pairing, z2_quasinorm, z3_quasinorm,
    Differential, SubspaceTag, Twisted2, Twisted3,
};
use twistlab::SeqVector;

fn main() -> twistlab::Result<()> {
    let x = SeqVector::new(vec![1.0, 2.0, -2.0])?;
    let graph = Twisted2::graph(&x);
    println!("graph of Ω₁,₀ in Z₂ has quasi-norm {} = ‖x‖₂", z2_quasinorm(&graph));
    println!("graph of Ω⟨2,1⟩,₀ in Z₃ has quasi-norm {}", z3_quasinorm(&Twisted3::graph(&x)));
    println!("Ω⟨2,1⟩,₀x = {:?}", omega21_0(&x));

    let (e1, e2) = (SeqVector::unit(2, 0), SeqVector::unit(2, 1));
    println!("defect of Ω₁,₀ on (e₁, e₂): {:.6}", omega10_defect(&e1, &e2)?);

    let (f, g) = (OrliczFunction::f(), OrliczFunction::g());
    for n in [16, 256, 4096] {
        let x = power_family(n, 1.0);
        let z = SeqVector::zeros(n);
        let lf = subspace_norm(&Twisted3::new(z.clone(), x.clone(), z.clone())?, SubspaceTag::Lf)?;
        let lg = subspace_norm(&Twisted3::new(z.clone(), z, x.clone())?, SubspaceTag::Lg)?;
        println!(
            "n = {n:>4}: Dom Ω₂,₀/ℓ_f = {:.4}, (0,x,0)/ℓ_f = {:.4}, (0,0,x)/ℓ_g = {:.4}",
            domain_norm(Differential::Omega20, &x) / luxemburg_norm(&f, &x),
            lf / luxemburg_norm(&f, &x),
            lg / luxemburg_norm(&g, &x)
        );
    }

    let a = Twisted3::new(SeqVector::unit(2, 0), SeqVector::zeros(2), SeqVector::zeros(2))?;
    let b = Twisted3::new(SeqVector::zeros(2), SeqVector::zeros(2), SeqVector::unit(2, 0))?;
    println!("U₃((e₁,0,0), (0,0,e₁)) = {}", u3_pairing(&a, &b)?);
    let p = Twisted2::new(e1.clone(), e2.clone())?;
    println!("U₂(p, p) = {} (antisymmetric)", u2_pairing(&p, &p)?);
    Ok(())
}

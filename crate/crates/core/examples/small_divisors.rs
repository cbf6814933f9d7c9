//! Liouville eigenvalue, closed-form coefficients, and the divergence table.

use locint::algebra::Scalar;
use locint::smalldiv::{
    divergence_certificate, h2_coefficients, liouville_zeta, log2_abs_enclosure, LiouvilleSchedule,
};

fn main() -> locint::Result<()> {
    let schedule = LiouvilleSchedule::new();
    let zeta = liouville_zeta(&schedule, 3)?;
    println!("zeta = {}", zeta.ball(64));
    for inst in zeta.liouville_instances()? {
        println!("k={} p={} q=2^{} holds={}", inst.k, inst.p, inst.q_log2, inst.holds());
    }

    let z = zeta.scalar(1024);
    let c = h2_coefficients(&z, 1, &Scalar::one(), &[(2, 0), (1, 1), (65, 256)])?;
    println!("m*=(2,0): {}", c[0]);
    println!("m*=(1,1): {:.6}", c[1].to_f64());
    println!("m*=(65,256): log2|c| = {:.3}", log2_abs_enclosure(&c[2]).mid());

    let cert = divergence_certificate(&schedule, 3)?;
    for r in &cert.records {
        println!(
            "k={} degree={} log2 r in [{:.9}, {:.9}]",
            r.k,
            if r.k < 3 { r.degree.to_string() } else { "p + 2^768".into() },
            r.log2_root_norm.lo,
            r.log2_root_norm.hi
        );
    }
    println!("increasing: {}", cert.is_increasing());
    Ok(())
}

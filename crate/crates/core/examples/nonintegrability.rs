//! Degree-by-degree certificate that no formal first integral exists.

use locint::algebra::Scalar;
use locint::integral::nonintegrability_report;

fn main() -> locint::Result<()> {
    for lambda in [vec![1, 2], vec![2, 3, 7]] {
        let l: Vec<Scalar> = lambda.iter().map(|&v| Scalar::from_int(v)).collect();
        let rep = nonintegrability_report(&l, 15)?;
        let mins: Vec<String> = rep.bounds.iter().map(|b| b.min_divisor.to_string()).collect();
        println!("{:?}: min divisors {}", lambda, mins.join(" "));
    }
    let resonant = [Scalar::from_int(1), Scalar::from_int(-1)];
    println!("(1, -1): {}", nonintegrability_report(&resonant, 4).unwrap_err());
    Ok(())
}

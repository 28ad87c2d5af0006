//! Six players joining with probability 1/2: every exact route and the
//! sub-player estimate agree on 21/128.

use num_rational::BigRational;
use racs_shapley::exact::exact_vector_rational;
use racs_shapley::game::{BernoulliGame, Method};
use racs_shapley::probability::Probability;
use racs_shapley::racs::{rationalize, shapley_racs_exact, RationalizeMode};

fn main() -> racs_shapley::error::Result<()> {
    for (num, den) in [(1, 2), (3, 5)] {
        let p = Probability::new(num, den)?;
        let game = BernoulliGame::homogeneous(6, p.clone())?;
        println!("n = 6, p = {p}");
        for method in [
            Method::ExactEnum,
            Method::ExactSymmetric,
            Method::ExactIntegral,
            Method::Homogeneous,
        ] {
            let v: Vec<BigRational> = exact_vector_rational(&game, method)?;
            println!("  {:<16} {}", method.to_string(), v[0]);
        }
        let rg = rationalize(&game, RationalizeMode::Exact)?;
        let racs = shapley_racs_exact(&rg)?;
        println!(
            "  {:<16} {}  (l = {}, m = {})",
            "racs",
            racs[0],
            rg.denominator(),
            rg.total()
        );
    }
    Ok(())
}

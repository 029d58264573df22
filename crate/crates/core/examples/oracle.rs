//! The fixpoint computation of uncertain bisimilarity against the semantic
//! oracle on random partial Mealy machines.
//!
//! ```text
//! cargo run --example oracle -- 200
//! ```

use apartness::bisim::{enumeration_budget, semantic_oracle_uncertain, uncertain_bisimilarity, OracleMethod};
use apartness::generate::random_small_mealy;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn main() -> apartness::Result<()> {
    let count: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100);
    let budget = enumeration_budget();
    let mut rng = StdRng::seed_from_u64(1);
    let (mut pairs, mut fallbacks) = (0, 0);
    for _ in 0..count {
        let m = random_small_mealy(&mut rng, 6, 3, 3);
        let ub = uncertain_bisimilarity(&m);
        for x in 0..m.state_count() {
            for y in 0..m.state_count() {
                let v = semantic_oracle_uncertain(&m, x, y, budget)?;
                assert_eq!(v.compatible, ub.contains(x, y));
                pairs += 1;
                fallbacks += usize::from(v.method == OracleMethod::ProductReachability);
            }
        }
    }
    println!("{count} machines, {pairs} pairs agree; {fallbacks} exceeded the budget of {budget} words");
    Ok(())
}

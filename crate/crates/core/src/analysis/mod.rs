//! Decision procedures over generalized automata and seeded generators
//! for property tests.

mod equivalence;
mod random;
pub mod rational;

pub use equivalence::{
    gpfa_equivalent, EquivalenceError, EquivalenceMode, EquivalenceVerdict, TOL_GAP, TOL_RANK,
};
pub use random::{
    haar_unitary, random_automaton, random_gpfa, random_kwqfa, random_measurement, random_nqfa,
    random_pfa, random_qfc, random_rational_gpfa, random_word, symbol_names, RandomSpec,
    RandomSpecError,
};

use crate::models::{CutpointSpec, Gpfa, InputError, Word};
use crate::sim::run_gpfa;

/// Cutpoint membership: `value(w) > λ`, strictly.
pub fn cutpoint_member(g: &Gpfa, cutpoint: &CutpointSpec, w: &Word) -> Result<bool, InputError> {
    Ok(run_gpfa(g, w)? > cutpoint.lambda())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convert::nqfa_to_gpfa;
    use crate::fixtures;

    #[test]
    fn rotation_at_half_is_not_a_member() {
        let g = nqfa_to_gpfa(fixtures::rotation_kwqfa(core::f64::consts::FRAC_PI_4).as_nqfa());
        let half = CutpointSpec::new(0.5).unwrap();
        assert!(!cutpoint_member(&g, &half, &Word::repeat(0, 1)).unwrap());
        assert!(cutpoint_member(&g, &half, &Word::repeat(0, 2)).unwrap());
    }

    #[test]
    fn identity_machine_is_always_a_member() {
        let g = nqfa_to_gpfa(fixtures::identity_kwqfa().as_nqfa());
        let c = CutpointSpec::new(0.99).unwrap();
        for len in 0..4 {
            for w in g.alphabet().words_of_length(len) {
                assert!(cutpoint_member(&g, &c, &w).unwrap());
            }
        }
    }

    #[test]
    fn binary_expansion_around_one_over_root_two() {
        let b = fixtures::binary_expansion_pfa().into_gpfa();
        let c = CutpointSpec::new(core::f64::consts::FRAC_1_SQRT_2).unwrap();
        let w = |s: &str| b.alphabet().parse_word(s).unwrap();
        assert!(!cutpoint_member(&b, &c, &w("1,0,1,1")).unwrap());
        assert!(cutpoint_member(&b, &c, &w("1,1")).unwrap());
    }
}

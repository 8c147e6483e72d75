//! The conditioning-exchange lemma, checked from both sides: the LP prover
//! produces an exact certificate, and a large representable-rank sample
//! fails to find any counterexample. Rank vectors of random subspace
//! arrangements satisfy every Shannon-type inequality, so a single sampled
//! violation would disprove the certificate.

use dof_core::entropy::{parse_file, parse_statement, prove, reconstructs, sample_representable, Mode};
use dof_core::Rat;
use num_traits::Zero;

const LEMMA: &str = "\
# exchanging conditioning under independence
given: I(W1;W4) = 0
H(Y1|W1) + H(Y1|W4) >= H(Y1|W2) + H(Y1|W1,W4)
";

#[test]
fn certificate_and_thousand_sample_oracle_agree() {
    let file = parse_file(LEMMA).unwrap();

    let outcome = prove(&file.target, &file.constraints, Mode::MiOnly).unwrap();
    assert!(outcome.provable(), "lemma must be provable in mi-only mode");
    assert!(reconstructs(&file.target, &file.constraints, &outcome));

    let samples =
        sample_representable(&file.ground, &[3, 2, 4, 2], &file.constraints, 1000, 7)
            .unwrap();
    assert_eq!(samples.len(), 1000);
    for (i, rv) in samples.iter().enumerate() {
        assert!(
            rv.eval(&file.constraints[0]).is_zero(),
            "sample {i} violates the independence constraint"
        );
        assert!(
            rv.eval(&file.target) >= Rat::zero(),
            "sample {i} violates the lemma: {:?}",
            rv
        );
    }
}

#[test]
fn dropping_the_independence_breaks_the_proof() {
    let file = parse_file(LEMMA).unwrap();
    let outcome = prove(&file.target, &[], Mode::MiOnly).unwrap();
    assert!(!outcome.provable());
}

#[test]
fn sampled_violations_only_occur_for_unprovable_claims() {
    // false monotonicity flip: violated by any sample where W4 adds
    // dimensions beyond W1's span, which is the generic case
    let claim = parse_statement("H(W1) >= H(W1,W4)").unwrap();
    let outcome = prove(&claim.expr, &[], Mode::Discrete).unwrap();
    assert!(!outcome.provable());

    let samples = sample_representable(claim.expr.ground(), &[2, 2], &[], 500, 11).unwrap();
    let violations = samples
        .iter()
        .filter(|rv| rv.eval(&claim.expr) < Rat::zero())
        .count();
    assert!(
        violations > 300,
        "only {violations} of 500 generic samples violated the false claim"
    );
}

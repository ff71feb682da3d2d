//! The finiteness engine: solve the height inequality for a radius `B`,
//! enumerate the ℓ¹ ball and certify every candidate.

pub mod bound;
pub mod candidate;
pub mod pipeline;

pub use bound::{ball_size, compute_bound, enumerate_candidates, BoundInputs, BoundRecord, Candidates, DEFAULT_GUARD};
pub use candidate::{test_candidate, CandidateReport, CandidateStatus, CandidateTester, PrecisionPolicy};
pub use pipeline::{
    basis_relations, run_pipeline, BranchCertificate, BranchMethod, FinitenessCertificate, SolutionRecord, Verdict,
    SIGMA_RETRIES,
};

/// Integer vectors as JSON numbers when they fit in `i64`, strings otherwise.
pub(crate) mod serde_ints {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Int {
        Small(i64),
        Big(String),
    }

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|x| i64::try_from(x).map_or_else(|_| Int::Big(x.to_string()), Int::Small))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Int>::deserialize(d)?
            .into_iter()
            .map(|i| match i {
                Int::Small(k) => Ok(BigInt::from(k)),
                Int::Big(s) => s.parse().map_err(D::Error::custom),
            })
            .collect()
    }
}

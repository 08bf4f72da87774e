//! Generators and validators for the transcendental families: Hypothesis 1,
//! runs of `p^{-1}`, repeated blocks, palindromic prefixes, Sturmian and
//! Thue–Morse quotient sequences.

mod beta;
mod construct;
mod hypothesis;
mod palindrome;
mod words;

pub use beta::{beta_approximant, BetaReport};
pub use construct::{
    certify, checkpoints, gen_ooto, gen_qper, Certificate, CertificateEntry, Construction, FamilyOutput, FamilySpec,
    OotoSpec, QPerSpec, Run,
};
pub use hypothesis::{fibonacci, hypothesis1_check, random_hypothesis1_prefix, Hypothesis1Report};
pub use palindrome::{palindrome_analysis, quotient_matrix, subspace_witness, symmetry_mismatches, PalindromeReport, SubspaceWitness};
pub use words::{
    gen_sturmian, gen_thue_morse, is_palindrome, palindromic_prefix_lengths, sturmian_word, thue_morse_word,
    RealQuadratic, SturmianSlope,
};

//! Direction sequences, their generators, and the reorderings built from them.

mod homography;
mod io;
mod net;
mod permutation;
mod sequence;
mod sigma1;
mod sigma2;
mod sigma_c;

pub use homography::{homography, homography_map, inverse_homography, HomographyMap};
pub use io::{read_jsonl, write_jsonl, PointRecord, SequenceHeader};
pub use net::{NetLevel, NetPlan, Region};
pub use permutation::Permutation;
pub use sequence::{
    annulus_index, apply_permutation, delete_subsequence, gen_dense, gen_kappa, gen_square_net_sequence,
    gen_theta, interleave, square_net_plan, square_net_size, DirectionSequence, Provenance,
};
pub use sigma1::{build_sigma1, kappa_slot, separation, theta_slot, Sigma1};
pub use sigma2::{
    build_sigma2, find_divergence_witnesses, search_sigma2_witnesses, theta_with_insertions, AdaptiveWitnesses,
    Sigma2, Witness, WitnessSearch,
};
pub use sigma_c::{
    annulus_counts, build_sigma_c, density_gaps, gen_sigma_c_sequence, next_annulus, satisfies_halving, SigmaC,
    SigmaCOptions, FORCED_LEVEL_FLOOR,
};


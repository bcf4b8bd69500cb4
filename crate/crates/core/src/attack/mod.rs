//! Attack strategies and exact evaluators: commitment double-opening with
//! grid search, the two-guesser correlation game with its ceiling, transfer
//! receiver attacks with exact / enumerated / sampled evaluation, the
//! reduction between the two pictures, and the extraction distinguisher.

mod distinguisher;
mod double_open;
mod moe;
mod reduction;
mod report;
mod rot_receiver;
mod tables;

pub use distinguisher::{
    build_distinguisher, distinguisher_advantage_exact, Distinguisher, DistinguisherReport,
};
pub use double_open::{
    double_open_search, double_open_success_exact, DoubleOpenCommitter, DoubleOpenFlipCheat,
    DoubleOpenSearch, DoubleOpenStrategy,
};
pub use moe::{
    moe_bound, moe_catalog, moe_game_value, moe_search_single_qubit, reassemble_by_bases,
    MoeResponse, MoeSearch, MoeStrategy, MOE_LAMBDA_CAP,
};
pub use reduction::{joint_string_guess_probability, reduce_to_moe};
pub use report::AttackRecord;
pub use rot_receiver::{
    attack_by_name, builtin_attacks, guess_probability_enumerated, guess_probability_exact,
    guess_probability_sampled, induced_joint_distribution, string_attacks, BranchGuess,
    BreidbartReceiver, ConstantStringsReceiver, ConstantValueReceiver, GuessEvaluation,
    HonestGuessReceiver, ReceiverStrategy, StandardBasisReceiver, EXACT_LAMBDA_CAP,
};

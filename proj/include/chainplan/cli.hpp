#ifndef CHAINPLAN_CLI_HPP_
#define CHAINPLAN_CLI_HPP_

namespace chainplan {

/// Command-line front end. Subcommands:
///   plan  --scenario <file> --out <dir> [--coarse <factor>] [--corridor <cells>]
///         [--tol <eq_tolerance>] [--max-iters <k>] [--seed <int>] [--plot-stride <k>]
///   check --scenario <file>
/// Exit codes: 0 success, 2 validation failure, 3 infeasible planning,
/// 4 solver failure, 1 anything else.
int cli_main(int argc, const char* const* argv);

}  // namespace chainplan

#endif  // CHAINPLAN_CLI_HPP_

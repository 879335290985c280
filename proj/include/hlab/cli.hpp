#pragma once
// histories_lab command line:
//   analyze (--scenario NAME | --config PATH) [--exact] [--tol X] [--delta X]
//           [--param NAME=VALUE ...] [--out PATH]
//   sweep --scenario eprb|leggett_garg --param NAME --range LO:HI:STEPS [...]
//         [--fix NAME=VALUE ...] [--out PATH]
// Exit codes: 0 ok, 2 usage or validation error, 3 numeric failure.

#include <ostream>
#include <string>
#include <vector>

namespace hlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hlab

#pragma once

namespace nogo::cli {

// Exit codes, stable across subcommands:
//   0  success / "expected" verdict confirmed
//   2  malformed input, bad flags, missing extension hook
//   3  search or probe budget exhausted
//   10 valuation found
//   11 no valuation exists (search exhausted)
int run(int argc, const char* const* argv);

}  // namespace nogo::cli

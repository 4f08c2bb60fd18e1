#ifndef MGFWA_CLI_HPP
#define MGFWA_CLI_HPP

namespace mgfwa::bench {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidArgs = 2;
inline constexpr int kExitIoFailure = 3;

/// Entry point behind the mgfwa_bench executable; callable in-process for
/// tests. Returns one of the kExit* codes.
int cli_main(int argc, const char* const* argv);

}  // namespace mgfwa::bench

#endif  // MGFWA_CLI_HPP

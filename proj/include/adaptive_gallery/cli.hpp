#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace adaptive_gallery::cli {

/// Stable exit codes.
enum ExitCode : int { kOk = 0, kUsage = 2, kIo = 3, kValidation = 4 };

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Summary lines go to `out`, diagnostics to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// Worker cap from ADAPTIVE_GALLERY_THREADS (unset or 0 = hardware concurrency).
unsigned thread_cap();

}  // namespace adaptive_gallery::cli

#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hierevo::cli {

inline constexpr std::string_view kVersion = "0.1.0";

/// Flat `key = value` settings; `#` starts a comment.
using Settings = std::map<std::string, std::string>;

/// Parses config text. Throws ConfigError naming the key (or "config" for
/// malformed lines).
Settings parse_config(std::string_view text);
Settings read_config_file(const std::string& path);

/// Runs one subcommand. args[0] is the program name. Returns the exit code:
/// 0 on success, 2 for usage or validation errors, 1 for failed runs.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hierevo::cli

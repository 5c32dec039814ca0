#pragma once

#include <map>
#include <string>

namespace ionqec {

/// Flat key=value configuration document. '#' starts a comment; blank lines
/// are ignored; later keys override earlier ones.
std::map<std::string, std::string> parse_config(const std::string& text);
std::map<std::string, std::string> load_config_file(const std::string& path);

}  // namespace ionqec

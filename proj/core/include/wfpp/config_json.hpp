#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "wfpp/engine.hpp"
#include "wfpp/experiments.hpp"

namespace wfpp {

/// Configuration failure carrying a stable machine-readable category:
/// "config.not_found", "config.parse", "config.unknown_key", "config.invalid".
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string category, const std::string& message)
        : std::runtime_error(message), category_(std::move(category)) {}
    const std::string& category() const { return category_; }

  private:
    std::string category_;
};

/// Norm grammar: "euclidean" | "l1" | "linf" | "scaled:<factor>:<base>" |
/// "shape:<csv path>" (dimension 2 only).
Norm parse_norm(const std::string& text, int dim);

/// Profile grammar: "const:<v>" | "normpow:<norm>:<power>[:<scale>]" |
/// "tab:<csv path>" (dimension 2 only).
SphereProfile parse_profile(const std::string& text, int dim);

/// Strict parsers: unknown keys raise "config.unknown_key" naming the dotted
/// path of the offending key.
RunConfig parse_run_config(const std::string& json_text);
ExperimentSpec parse_experiment_spec(const std::string& json_text);

/// Reads a whole file; raises "config.not_found" if it cannot be opened.
std::string read_text_file(const std::string& path);

/// Applies "dotted.path=value" overrides to a JSON document and returns the
/// updated text. Values parse as JSON, falling back to literal strings.
std::string apply_overrides(const std::string& json_text,
                            const std::vector<std::string>& overrides);

}  // namespace wfpp

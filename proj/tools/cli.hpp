#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "rql/ozawa.hpp"

namespace rql::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kVerificationFailed = 1;
inline constexpr int kUsageError = 2;

/// Schema violation in a JSON config; `field` is the dotted path.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string field, const std::string &what)
        : std::runtime_error("config field '" + field + "': " + what),
          field_(std::move(field)) {}
    [[nodiscard]] const std::string &field() const { return field_; }

  private:
    std::string field_;
};

inline constexpr int kOzawaSchemaVersion = 1;

/// Parses and schema-checks an Ozawa protocol config (see
/// schemas/ozawa_config.schema.json). Physical validity is checked later by
/// ozawa::validate.
ozawa::OzawaConfig parse_ozawa_config(const nlohmann::json &j);

/// Entry point shared by the executable and the tests.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace rql::cli

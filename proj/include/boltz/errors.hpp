#pragma once

#include <stdexcept>
#include <string>

namespace boltz {

/// Nonpositive density or temperature at a spatial node.
class DegenerateMoments : public std::runtime_error {
public:
  DegenerateMoments(const std::string& what, int node, double x)
      : std::runtime_error(what), node_(node), x_(x) {}
  int node() const { return node_; }
  double x() const { return x_; }

private:
  int node_;
  double x_;
};

class SingularTableau : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A time step could not be completed; carries the stage (1-based, 0 if not stage specific) and time.
class StepFailure : public std::runtime_error {
public:
  StepFailure(const std::string& what, int stage, double time)
      : std::runtime_error(what), stage_(stage), time_(time) {}
  int stage() const { return stage_; }
  double time() const { return time_; }

private:
  int stage_;
  double time_;
};

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace boltz

namespace boltz {

/// Malformed tableau file; line() is 1-based (0 when not line specific).
class TableauParseError : public ConfigError {
public:
  TableauParseError(const std::string& what, int line) : ConfigError(what), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

}  // namespace boltz

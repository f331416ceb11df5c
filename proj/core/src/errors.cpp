#include "quartz/errors.hpp"

#include <sstream>

namespace quartz {

namespace {

std::string infeasible_message(std::size_t index, double value) {
  std::ostringstream os;
  os << "dual variable alpha[" << index << "] = " << value
     << " is outside the dual feasible box";
  return os.str();
}

std::string support_message(double size, double limit) {
  std::ostringstream os;
  os << "sampling support has " << size << " sets, more than the enumeration limit "
     << limit;
  return os.str();
}

std::string data_message(const std::string& what, std::size_t line) {
  if (line == 0) return what;
  return "line " + std::to_string(line) + ": " + what;
}

}  // namespace

InfeasibleDualError::InfeasibleDualError(std::size_t index, double value)
    : Error(infeasible_message(index, value)), index_(index), value_(value) {}

SeparabilityError::SeparabilityError(std::size_t row)
    : Error("feature row " + std::to_string(row) +
            " has nonzeros in more than one group"),
      row_(row) {}

SupportTooLargeError::SupportTooLargeError(double support_size, double limit)
    : Error(support_message(support_size, limit)), support_size_(support_size) {}

DataError::DataError(const std::string& what, std::size_t line)
    : Error(data_message(what, line)), line_(line) {}

}  // namespace quartz

#include "foldcore/numeric.hpp"

#include <fmt/format.h>

namespace foldcore {

std::string format_real(double value) { return fmt::format("{}", value); }

std::string format_csv_real(double value) { return fmt::format("{:.17g}", value); }

}  // namespace foldcore

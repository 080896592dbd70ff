#include "fairwork/report.hpp"

#include <cmath>

#include "fairwork/error.hpp"

namespace fairwork {

std::string_view penalty_name(Penalty p) {
  switch (p) {
    case Penalty::none: return "none";
    case Penalty::abs_dev: return "absdev";
    case Penalty::kl: return "kl";
  }
  return "none";
}

Penalty parse_penalty(std::string_view text) {
  if (text == "none") return Penalty::none;
  if (text == "absdev" || text == "abs-dev" || text == "abs_dev") return Penalty::abs_dev;
  if (text == "kl") return Penalty::kl;
  throw Error(ErrorKind::parse, "penalty: unknown value '" + std::string(text) + "' (expected absdev or kl)");
}

double total_variation(const Allocation& x) {
  double tv = 0.0;
  for (std::size_t i = 0; i < x.num_buyers(); ++i) {
    for (std::size_t j = 0; j < x.num_items(); ++j) {
      for (std::size_t t = 0; t + 1 < x.num_periods(); ++t) tv += std::fabs(x.at(i, j, t + 1) - x.at(i, j, t));
    }
  }
  return tv;
}

}  // namespace fairwork

#include "vh/error.hpp"

namespace vh {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::domain: return "domain error";
    case Errc::numerical: return "numerical failure";
    case Errc::usage: return "usage error";
    case Errc::parse: return "parse error";
    case Errc::singularity: return "invariant undefined across singularity";
    case Errc::not_a_shock: return "not a shock";
    case Errc::no_intersection: return "wave-curve intersection not found";
    case Errc::positivity_lost: return "positivity lost";
  }
  return "error";
}

}  // namespace vh

#pragma once

#include <stdexcept>
#include <string>

namespace vh {

enum class Errc {
  domain,           // argument outside the mathematical domain
  numerical,        // solver failure, non-convergence, lost hyperbolicity
  usage,            // inconsistent arguments (mismatched grids, d, ...)
  parse,            // configuration / CSV input errors
  singularity,      // integration path crosses sin(theta)=0 style singularities
  not_a_shock,      // states not connected by a Rankine-Hugoniot discontinuity
  no_intersection,  // wave curves do not meet in the search bracket
  positivity_lost,  // rho <= floor after a scheme update
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace vh

#ifndef SINKDIV_TYPES_HPP
#define SINKDIV_TYPES_HPP
//
// Project     : sinkdiv
// Module      : types
// Description : shared dense-algebra aliases and the error taxonomy
//

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace sinkdiv {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Failure classes. The C API maps these onto stable status codes and the CLI
// onto exit codes (validation / convergence / numerical / io).
enum class errc {
  invalid_argument,
  length_mismatch,
  zero_mass_part,
  out_of_range,
  bad_size,
  unknown_smoothness,
  divergent_rank,
  nonpositive_denominator,
  max_iter_exceeded,
  io_error,
};

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool ok, errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

} // namespace sinkdiv

#endif

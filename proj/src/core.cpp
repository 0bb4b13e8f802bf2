//
// Project     : sinkdiv
// Module      : core
//

#include "sinkdiv/core.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace sinkdiv {

Grid1D::Grid1D(double x_min, double x_max, Index n) : x_min_(x_min), x_max_(x_max), n_(n) {
  require(std::isfinite(x_min) && std::isfinite(x_max), errc::invalid_argument,
          "grid bounds must be finite");
  require(x_max > x_min, errc::invalid_argument, "grid needs x_max > x_min");
  require(n >= 2, errc::invalid_argument, "grid needs at least two points");
  spacing_ = (x_max - x_min) / static_cast<double>(n - 1);
}

Vector Grid1D::points() const {
  Vector x(n_);
  for (Index i = 0; i < n_; ++i) x(i) = point(i);
  return x;
}

TensorGrid::TensorGrid(std::vector<Grid1D> axes) : axes_(std::move(axes)) {
  require(!axes_.empty(), errc::invalid_argument, "tensor grid needs at least one axis");
  size_ = 1;
  for (const Grid1D& axis : axes_) {
    require(size_ <= std::numeric_limits<Index>::max() / axis.size(),
            errc::invalid_argument, "tensor grid size overflows");
    size_ *= axis.size();
  }
}

const Grid1D& TensorGrid::axis(Index k) const {
  require(k >= 0 && k < dim(), errc::out_of_range, "axis index out of range");
  return axes_[static_cast<std::size_t>(k)];
}

Index TensorGrid::linear_index(const std::vector<Index>& multi) const {
  require(static_cast<Index>(multi.size()) == dim(), errc::length_mismatch,
          "multi index has wrong dimension");
  Index linear = 0;
  for (Index k = dim() - 1; k >= 0; --k) {
    const Index nk = axes_[static_cast<std::size_t>(k)].size();
    const Index ik = multi[static_cast<std::size_t>(k)];
    require(ik >= 0 && ik < nk, errc::out_of_range, "multi index out of range");
    linear = linear * nk + ik;
  }
  return linear;
}

std::vector<Index> TensorGrid::multi_index(Index linear) const {
  require(linear >= 0 && linear < size_, errc::out_of_range, "linear index out of range");
  std::vector<Index> multi(static_cast<std::size_t>(dim()));
  for (Index k = 0; k < dim(); ++k) {
    const Index nk = axes_[static_cast<std::size_t>(k)].size();
    multi[static_cast<std::size_t>(k)] = linear % nk;
    linear /= nk;
  }
  return multi;
}

double stable_sum(const Vector& v) {
  double sum = 0.0;
  double carry = 0.0;
  for (Index i = 0; i < v.size(); ++i) {
    const double y = v(i) - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

ProbabilityVector::ProbabilityVector(Vector values) : values_(std::move(values)) {
  require(values_.size() > 0, errc::invalid_argument, "probability vector is empty");
  require(values_.allFinite(), errc::invalid_argument,
          "probability vector has nonfinite entries");
  require((values_.array() >= 0.0).all(), errc::invalid_argument,
          "probability vector has negative entries");
  const double sum = stable_sum(values_);
  require(std::abs(sum - 1.0) <= 1e-12, errc::invalid_argument,
          "probability vector does not sum to 1");
}

SignedSignal::SignedSignal(Vector values) : values_(std::move(values)) {
  require(values_.size() > 0, errc::invalid_argument, "signal is empty");
  require(values_.allFinite(), errc::invalid_argument, "signal has nonfinite entries");
}

SplitSignal split_and_normalize(const SignedSignal& signal) {
  const Vector& f = signal.values();
  Vector pos = f.cwiseMax(0.0);
  Vector neg = (-f).cwiseMax(0.0);
  const double pos_mass = stable_sum(pos);
  const double neg_mass = stable_sum(neg);
  require(pos_mass > 1e-14, errc::zero_mass_part, "positive part has mass <= 1e-14");
  require(neg_mass > 1e-14, errc::zero_mass_part, "negative part has mass <= 1e-14");
  pos /= pos_mass;
  neg /= neg_mass;
  return SplitSignal{ProbabilityVector(std::move(pos)), ProbabilityVector(std::move(neg)),
                     pos_mass, neg_mass};
}

Vector resample_to_grid(const Vector& src_values, const Vector& src_points,
                        const Grid1D& target) {
  require(src_values.size() == src_points.size(), errc::length_mismatch,
          "sample/point count mismatch");
  require(src_points.size() >= 2, errc::invalid_argument, "need at least two samples");
  for (Index i = 0; i + 1 < src_points.size(); ++i)
    require(src_points(i) < src_points(i + 1), errc::invalid_argument,
            "source points must be strictly increasing");
  require(target.x_min() >= src_points(0) && target.x_max() <= src_points(src_points.size() - 1),
          errc::out_of_range, "target grid extends outside the sampled interval");

  Vector out(target.size());
  Index j = 0;
  for (Index i = 0; i < target.size(); ++i) {
    const double t = target.point(i);
    while (j + 2 < src_points.size() && src_points(j + 1) < t) ++j;
    const double x0 = src_points(j);
    const double x1 = src_points(j + 1);
    const double w = (t - x0) / (x1 - x0);
    out(i) = (1.0 - w) * src_values(j) + w * src_values(j + 1);
  }
  return out;
}

namespace {

bool parse_meta_line(const std::string& line, Index* n, Index* d, std::vector<Index>* nk) {
  std::istringstream in(line.substr(1));
  std::string token;
  bool seen_any = false;
  while (in >> token) {
    const std::size_t eq = token.find('=');
    if (eq == std::string::npos) return false;
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "n") {
      *n = std::stoll(value);
    } else if (key == "d") {
      *d = std::stoll(value);
    } else if (key == "nk") {
      nk->clear();
      std::istringstream list(value);
      std::string item;
      while (std::getline(list, item, ',')) nk->push_back(std::stoll(item));
    } else {
      return false;
    }
    seen_any = true;
  }
  return seen_any;
}

} // namespace

VectorCsv read_vector_csv(std::istream& in, const std::string& name) {
  VectorCsv out;
  std::vector<double> values;
  Index meta_n = -1;
  Index meta_d = 1;
  std::vector<Index> meta_nk;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first && line[0] == '#') {
      try {
        out.has_meta = parse_meta_line(line, &meta_n, &meta_d, &meta_nk);
      } catch (const std::exception&) {
        out.has_meta = false;
      }
      require(out.has_meta, errc::io_error, name + ": malformed metadata header");
      first = false;
      continue;
    }
    first = false;
    char* end = nullptr;
    const double value = std::strtod(line.c_str(), &end);
    require(end != line.c_str(), errc::io_error, name + ": unreadable value line");
    while (*end == ' ' || *end == '\t') ++end;
    require(*end == '\0', errc::io_error, name + ": trailing characters on value line");
    values.push_back(value);
  }
  require(!values.empty(), errc::io_error, name + ": no values");
  out.values = Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
  if (out.has_meta) {
    require(meta_n == out.values.size(), errc::io_error,
            name + ": metadata n disagrees with value count");
    if (meta_nk.empty()) meta_nk.push_back(meta_n);
    require(meta_d == static_cast<Index>(meta_nk.size()), errc::io_error,
            name + ": metadata d disagrees with nk list");
    Index prod = 1;
    for (Index nk : meta_nk) prod *= nk;
    require(prod == meta_n, errc::io_error, name + ": metadata nk does not multiply to n");
    out.d = meta_d;
    out.nk = std::move(meta_nk);
  } else {
    out.d = 1;
    out.nk = {out.values.size()};
  }
  return out;
}

VectorCsv read_vector_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), errc::io_error, "cannot open " + path);
  return read_vector_csv(in, path);
}

void write_vector_csv(const std::string& path, const Vector& values, Index d,
                      const std::vector<Index>& nk) {
  require(static_cast<Index>(nk.size()) == d, errc::length_mismatch,
          "nk list does not match d");
  Index prod = 1;
  for (Index n : nk) prod *= n;
  require(prod == values.size(), errc::length_mismatch, "nk does not multiply to n");
  std::ofstream out(path);
  require(out.good(), errc::io_error, "cannot open " + path + " for writing");
  out << "# n=" << values.size() << " d=" << d << " nk=";
  for (std::size_t k = 0; k < nk.size(); ++k) out << (k ? "," : "") << nk[k];
  out << "\n";
  char buf[32];
  for (Index i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", values(i));
    out << buf << "\n";
  }
  require(out.good(), errc::io_error, "write failed for " + path);
}

void write_vector_csv(const std::string& path, const Vector& values) {
  write_vector_csv(path, values, 1, {values.size()});
}

} // namespace sinkdiv

#include "foilspace/kle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <Eigen/SVD>

#include "json.hpp"

#include "foilspace/error.hpp"
#include "foilspace/rng.hpp"

namespace foilspace {

namespace {

// Largest-magnitude component of each basis vector is made positive, so the
// expansion is reproducible across SVD backends (which are free to flip the
// sign of any singular-vector pair).
void fix_signs(Eigen::MatrixXd& basis) {
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    Eigen::Index imax = 0;
    basis.col(c).cwiseAbs().maxCoeff(&imax);
    if (basis(imax, c) < 0.0) basis.col(c) = -basis.col(c);
  }
}

}  // namespace

LatentSpace fit_kle(const DesignMatrix& dm, double beta) {
  if (!(beta > 0.0) || beta > 1.0)
    throw_error(ErrorCode::InvalidArgument,
                "variance fraction must be in (0, 1]");
  const Eigen::Index m = dm.rows.rows();
  if (m < 2)
    throw_error(ErrorCode::InvalidArgument,
                "need at least 2 members to fit a latent space");

  LatentSpace ls;
  ls.layout = dm.layout;
  ls.beta = beta;
  ls.mean = dm.rows.colwise().mean();

  Eigen::MatrixXd centered = dm.rows.rowwise() - ls.mean.transpose();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::VectorXd lambda(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    double v = s(i) * s(i) / static_cast<double>(m - 1);
    lambda(i) = v > 0.0 ? v : 0.0;
  }
  const double total = lambda.sum();
  if (!(total > 0.0))
    throw_error(ErrorCode::Numeric,
                "design matrix has zero variance, nothing to expand");
  ls.total_variance = total;

  // Smallest k whose cumulative variance reaches beta of the total. The tiny
  // relative slack keeps beta = 1 from tripping on summation roundoff.
  Eigen::Index k = lambda.size();
  double cum = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    cum += lambda(i);
    if (cum >= beta * total * (1.0 - 1e-12)) {
      k = i + 1;
      break;
    }
  }

  ls.eigenvalues = lambda.head(k);
  ls.basis = svd.matrixV().leftCols(k);
  fix_signs(ls.basis);
  return ls;
}

Eigen::VectorXd encode(const LatentSpace& ls, const std::vector<double>& ssv) {
  if (ssv.size() != static_cast<size_t>(ls.mean.size()))
    throw_error(ErrorCode::InvalidArgument,
                "vector length does not match the latent space layout");
  Eigen::Map<const Eigen::VectorXd> x(ssv.data(),
                                      static_cast<Eigen::Index>(ssv.size()));
  return ls.basis.transpose() * (x - ls.mean);
}

std::vector<double> decode_vector(const LatentSpace& ls,
                                  const Eigen::VectorXd& u) {
  if (u.size() != ls.basis.cols())
    throw_error(ErrorCode::InvalidArgument,
                "latent vector has dimension " + std::to_string(u.size()) +
                    ", space has " + std::to_string(ls.basis.cols()));
  Eigen::VectorXd x = ls.mean + ls.basis * u;
  return std::vector<double>(x.data(), x.data() + x.size());
}

PolylineFoil decode_foil(const LatentSpace& ls, const Eigen::VectorXd& u,
                         const std::string& name) {
  return extract_geometry(decode_vector(ls, u), ls.layout, name);
}

LatentBounds latent_bounds(const LatentSpace& ls, double alpha) {
  if (!(alpha > 0.0))
    throw_error(ErrorCode::InvalidArgument, "alpha must be positive");
  LatentBounds b;
  b.alpha = alpha;
  b.low.resize(ls.eigenvalues.size());
  b.high.resize(ls.eigenvalues.size());
  for (Eigen::Index i = 0; i < ls.eigenvalues.size(); ++i) {
    const double r = alpha * std::sqrt(ls.eigenvalues(i));
    b.low(i) = -r;
    b.high(i) = r;
  }
  return b;
}

std::vector<LatentSample> sample_latent(const LatentSpace& ls,
                                        const LatentBounds& lb, int count,
                                        uint64_t seed) {
  if (count < 1)
    throw_error(ErrorCode::InvalidArgument, "sample count must be >= 1");
  if (lb.low.size() != ls.eigenvalues.size())
    throw_error(ErrorCode::InvalidArgument,
                "bounds dimension does not match the latent space");
  Rng rng(seed, "latent-sample");
  std::vector<LatentSample> out;
  out.reserve(static_cast<size_t>(count));
  char label[32];
  for (int i = 0; i < count; ++i) {
    LatentSample s;
    s.u.resize(lb.low.size());
    for (Eigen::Index d = 0; d < lb.low.size(); ++d)
      s.u(d) = rng.uniform(lb.low(d), lb.high(d));
    std::snprintf(label, sizeof label, "sample-%06d", i);
    s.foil = decode_foil(ls, s.u, label);
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw_error(ErrorCode::Io, "cannot write " + path);
  char num[64];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::snprintf(num, sizeof num, c == 0 ? "%.17g" : ",%.17g", m(r, c));
      out << num;
    }
    out << '\n';
  }
  out.close();
  if (!out) throw_error(ErrorCode::Io, "failed writing " + path);
}

std::string strip_json_suffix(const std::string& path) {
  const std::string suffix = ".json";
  if (path.size() > suffix.size() &&
      path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0)
    return path.substr(0, path.size() - suffix.size());
  return path;
}

Eigen::MatrixXd read_matrix_csv(const std::string& path, Eigen::Index rows,
                                Eigen::Index cols) {
  std::ifstream in(path);
  if (!in) throw_error(ErrorCode::Io, "cannot open " + path);
  Eigen::MatrixXd m(rows, cols);
  std::string line;
  Eigen::Index r = 0;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (r >= rows)
      throw_error(ErrorCode::Parse, path + ": more rows than expected");
    std::istringstream ls(line);
    std::string cell;
    Eigen::Index c = 0;
    while (std::getline(ls, cell, ',')) {
      if (c >= cols)
        throw_error(ErrorCode::Parse, path + ": more columns than expected");
      try {
        m(r, c) = std::stod(cell);
      } catch (const std::exception&) {
        std::ostringstream os;
        os << path << " line " << line_no << ": bad numeric cell";
        throw_error(ErrorCode::Parse, os.str());
      }
      ++c;
    }
    if (c != cols) {
      std::ostringstream os;
      os << path << " line " << line_no << ": expected " << cols
         << " columns, got " << c;
      throw_error(ErrorCode::Parse, os.str());
    }
    ++r;
  }
  if (r != rows) throw_error(ErrorCode::Parse, path + ": missing rows");
  return m;
}

}  // namespace

void save_latent_space(const LatentSpace& ls, const std::string& path) {
  const std::string base_path = strip_json_suffix(path);
  nlohmann::json j;
  j["n_points"] = ls.layout.n_points;
  j["aug"] = aug_kind_name(ls.layout.aug);
  j["aug_length"] = ls.layout.aug_length;
  j["weight"] = ls.layout.weight;
  j["beta"] = ls.beta;
  j["alpha"] = ls.alpha;
  j["kappa"] = ls.kappa();
  j["dimension"] = ls.mean.size();
  j["total_variance"] = ls.total_variance;
  std::vector<double> ev(ls.eigenvalues.data(),
                         ls.eigenvalues.data() + ls.eigenvalues.size());
  j["eigenvalues"] = ev;
  j["mean_csv"] = base_path + ".mean.csv";
  j["basis_csv"] = base_path + ".basis.csv";

  std::ofstream out(base_path + ".json");
  if (!out) throw_error(ErrorCode::Io, "cannot write " + base_path + ".json");
  out << j.dump(2) << '\n';
  out.close();
  if (!out) throw_error(ErrorCode::Io, "failed writing " + base_path + ".json");

  write_matrix_csv(ls.mean.transpose(), base_path + ".mean.csv");
  write_matrix_csv(ls.basis, base_path + ".basis.csv");
}

LatentSpace load_latent_space(const std::string& path) {
  const std::string base_path = strip_json_suffix(path);
  nlohmann::json j;
  {
    std::ifstream in(base_path + ".json");
    if (!in) throw_error(ErrorCode::Io, "cannot open " + base_path + ".json");
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw_error(ErrorCode::Parse, base_path + ".json: " + e.what());
    }
  }
  LatentSpace ls;
  try {
    ls.layout.n_points = j.at("n_points").get<int>();
    ls.layout.aug = aug_kind_from_name(j.at("aug").get<std::string>());
    ls.layout.aug_length = j.at("aug_length").get<int>();
    ls.layout.weight = j.at("weight").get<double>();
    ls.beta = j.at("beta").get<double>();
    ls.alpha = j.at("alpha").get<double>();
    ls.total_variance = j.at("total_variance").get<double>();
    const auto ev = j.at("eigenvalues").get<std::vector<double>>();
    ls.eigenvalues =
        Eigen::Map<const Eigen::VectorXd>(ev.data(),
                                          static_cast<Eigen::Index>(ev.size()));
    const Eigen::Index dim = j.at("dimension").get<Eigen::Index>();
    const Eigen::Index kappa = j.at("kappa").get<Eigen::Index>();
    if (kappa != ls.eigenvalues.size())
      throw_error(ErrorCode::Parse, "kappa does not match eigenvalue count");
    // Companion files are looked up next to the JSON, so the trio can be
    // moved as a unit.
    ls.mean = read_matrix_csv(base_path + ".mean.csv", 1, dim).transpose();
    ls.basis = read_matrix_csv(base_path + ".basis.csv", dim, kappa);
  } catch (const nlohmann::json::exception& e) {
    throw_error(ErrorCode::Parse,
                base_path + ".json: " + std::string(e.what()));
  }
  if (ls.layout.total_length() != ls.mean.size())
    throw_error(ErrorCode::Parse,
                "stored layout does not match the mean vector length");
  return ls;
}

}  // namespace foilspace

#include "foilspace/perf.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "foilspace/discretize.hpp"

#include "foilspace/error.hpp"
#include "foilspace/ingest.hpp"

namespace foilspace {

void validate_flow_condition(const FlowCondition& fc) {
  if (!(fc.reynolds > 0.0) || !std::isfinite(fc.reynolds))
    throw_error(ErrorCode::InvalidArgument, "Reynolds number must be positive");
  if (!(fc.mach >= 0.0) || fc.mach >= 1.0)
    throw_error(ErrorCode::InvalidArgument, "Mach number must be in [0, 1)");
  if (!std::isfinite(fc.alpha_deg) || std::fabs(fc.alpha_deg) > 90.0)
    throw_error(ErrorCode::InvalidArgument,
                "angle of attack must be within +-90 degrees");
  if (fc.iter_limit < 1)
    throw_error(ErrorCode::InvalidArgument, "iteration limit must be >= 1");
}

namespace {

struct SurfaceTable {
  std::vector<double> x, y;
};

// Strictly increasing x sweep. Both surfaces of a profile go through this
// identical path, which is what makes mirrored profiles cancel exactly.
SurfaceTable build_table(const std::vector<Point2>& pts, size_t lo, size_t hi,
                         bool reversed) {
  SurfaceTable t;
  t.x.reserve(hi - lo + 1);
  t.y.reserve(hi - lo + 1);
  auto add = [&t](const Point2& p) {
    if (!t.x.empty() && !(p.x > t.x.back())) return;
    t.x.push_back(p.x);
    t.y.push_back(p.y);
  };
  if (reversed) {
    for (size_t i = hi + 1; i-- > lo;) add(pts[i]);
  } else {
    for (size_t i = lo; i <= hi; ++i) add(pts[i]);
  }
  return t;
}

double interp(const SurfaceTable& t, double x) {
  if (x <= t.x.front()) return t.y.front();
  if (x >= t.x.back()) return t.y.back();
  const auto it = std::upper_bound(t.x.begin(), t.x.end(), x);
  const size_t hi = static_cast<size_t>(it - t.x.begin());
  const size_t lo = hi - 1;
  const double f = (x - t.x[lo]) / (t.x[hi] - t.x[lo]);
  return t.y[lo] + (t.y[hi] - t.y[lo]) * f;
}

}  // namespace

PolarPoint surrogate_eval(const PolylineFoil& pf, const FlowCondition& fc) {
  validate_flow_condition(fc);
  const auto& pts = pf.points;
  const size_t n = pts.size();
  if (n < 4)
    throw_error(ErrorCode::Domain, "profile needs at least 4 points");

  size_t i_le = 0;
  for (size_t i = 1; i < n; ++i)
    if (pts[i].x < pts[i_le].x) i_le = i;
  if (i_le < 1 || i_le > n - 2)
    throw_error(ErrorCode::Domain,
                "cannot split the profile at the leading edge");

  const SurfaceTable first = build_table(pts, 0, i_le, /*reversed=*/true);
  const SurfaceTable second = build_table(pts, i_le, n - 1, /*reversed=*/false);
  if (first.x.size() < 2 || second.x.size() < 2)
    throw_error(ErrorCode::Domain, "degenerate surface in the profile");

  const double x_lo = std::max(first.x.front(), second.x.front());
  const double x_hi = std::min(first.x.back(), second.x.back());
  const double span = x_hi - x_lo;
  if (!(span > 0.0))
    throw_error(ErrorCode::Domain, "surfaces do not overlap in x");

  constexpr int kStations = 129;
  std::vector<double> z(kStations);
  double thickness = 0.0;
  for (int k = 0; k < kStations; ++k) {
    const double x = x_lo + span * static_cast<double>(k) /
                                 static_cast<double>(kStations - 1);
    const double ya = interp(first, x);
    const double yb = interp(second, x);
    z[static_cast<size_t>(k)] = 0.5 * (ya + yb);
    thickness = std::max(thickness, std::fabs(ya - yb));
  }

  // Mean line relative to its own chord line (the straight segment between
  // the first and last station), so a rotated or shifted profile reads the
  // same camber.
  const double z0 = z.front();
  const double z1 = z.back();
  const double dx = span / static_cast<double>(kStations - 1);
  double integral = 0.0;
  for (int k = 0; k < kStations; ++k) {
    const double frac =
        static_cast<double>(k) / static_cast<double>(kStations - 1);
    const double rel = z[static_cast<size_t>(k)] - (z0 + (z1 - z0) * frac);
    const double wgt = (k == 0 || k == kStations - 1) ? 0.5 : 1.0;
    integral += wgt * rel * dx;
  }
  const double m_c = integral / (span * span);

  PolarPoint pp;
  pp.source = "surrogate";
  pp.converged = true;
  const double alpha_rad = fc.alpha_deg * M_PI / 180.0;
  pp.cl = 2.0 * M_PI * (alpha_rad + 2.0 * m_c);
  const double tc = thickness / span;
  pp.cd = 0.074 / std::pow(fc.reynolds, 0.2) * (1.0 + 2.7 * tc);
  pp.ld = pp.cd != 0.0 ? pp.cl / pp.cd : 0.0;
  return pp;
}

namespace {

std::string make_temp_dir() {
  const char* base = std::getenv("TMPDIR");
  std::string tmpl = std::string(base && *base ? base : "/tmp");
  tmpl += "/foil-eval-XXXXXX";
  std::vector<char> buf(tmpl.begin(), tmpl.end());
  buf.push_back('\0');
  if (mkdtemp(buf.data()) == nullptr)
    throw_error(ErrorCode::Io, "cannot create a temporary work directory");
  return std::string(buf.data());
}

struct PolarRow {
  double alpha = 0.0, cl = 0.0, cd = 0.0;
};

// The accumulation file starts with a banner, then a dashed separator, then
// one row per converged analysis point: alpha CL CD CDp CM ...
std::optional<PolarRow> parse_polar_file(const std::string& path,
                                         double want_alpha) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string line;
  bool in_data = false;
  std::optional<PolarRow> best;
  double best_gap = 1e9;
  while (std::getline(in, line)) {
    if (!in_data) {
      const auto pos = line.find_first_not_of(" -\r");
      const bool dashes =
          line.find("---") != std::string::npos && pos == std::string::npos;
      if (dashes) in_data = true;
      continue;
    }
    std::istringstream ls(line);
    PolarRow row;
    if (!(ls >> row.alpha >> row.cl >> row.cd)) continue;
    const double gap = std::fabs(row.alpha - want_alpha);
    if (gap < best_gap) {
      best_gap = gap;
      best = row;
    }
  }
  if (best && best_gap > 0.51) return std::nullopt;  // some other point only
  return best;
}

class SigpipeGuard {
 public:
  SigpipeGuard() { prev_ = signal(SIGPIPE, SIG_IGN); }
  ~SigpipeGuard() { signal(SIGPIPE, prev_); }

 private:
  using Handler = void (*)(int);
  Handler prev_;
};

}  // namespace

PolarPoint xfoil_eval(const PolylineFoil& pf, const FlowCondition& fc,
                      const XfoilOptions& opt) {
  validate_flow_condition(fc);
  if (!(opt.timeout_sec > 0.0))
    throw_error(ErrorCode::InvalidArgument, "timeout must be positive");

  namespace fs = std::filesystem;
  const bool own_dir = opt.workdir.empty();
  const std::string dir = own_dir ? make_temp_dir() : opt.workdir;
  struct DirCleanup {
    std::string path;
    bool active;
    ~DirCleanup() {
      if (active) {
        std::error_code ec;
        fs::remove_all(path, ec);
      }
    }
  } cleanup{dir, own_dir};
  if (!own_dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw_error(ErrorCode::Io, "cannot create workdir " + dir);
  }

  // XFOIL's buffer geometry is capped at 300-ish panels; denser inputs are
  // re-discretized down before handoff.
  const PolylineFoil* input = &pf;
  PolylineFoil reduced;
  if (pf.size() > 300) {
    const Scheme s = pf.has_scheme ? pf.scheme : Scheme::Cosine;
    reduced = resample_polyline(pf, s, 300).foil;
    input = &reduced;
  }

  const std::string coords_path = dir + "/profile.dat";
  const std::string polar_path = dir + "/polar.txt";
  {
    std::ofstream out(coords_path);
    if (!out) throw_error(ErrorCode::Io, "cannot write " + coords_path);
    write_dat(*input, out, 7);
    out.close();
    if (!out) throw_error(ErrorCode::Io, "failed writing " + coords_path);
  }
  {
    // A stale accumulation file would make PACC append instead of create.
    std::error_code ec;
    fs::remove(polar_path, ec);
  }

  char num[64];
  std::string script;
  script += "PLOP\nG F\n\n";
  script += "LOAD " + coords_path + "\n";
  if (opt.repanel) script += "PANE\n";
  script += "OPER\n";
  std::snprintf(num, sizeof num, "VISC %.17g\n", fc.reynolds);
  script += num;
  std::snprintf(num, sizeof num, "MACH %.17g\n", fc.mach);
  script += num;
  std::snprintf(num, sizeof num, "ITER %d\n", fc.iter_limit);
  script += num;
  script += "PACC\n" + polar_path + "\n\n";
  std::snprintf(num, sizeof num, "ALFA %.17g\n", fc.alpha_deg);
  script += num;
  script += "\nQUIT\n";

  int in_pipe[2] = {-1, -1};
  int out_pipe[2] = {-1, -1};
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) {
    if (in_pipe[0] >= 0) close(in_pipe[0]);
    if (in_pipe[1] >= 0) close(in_pipe[1]);
    throw_error(ErrorCode::External, "cannot create pipes");
  }

  const pid_t pid = fork();
  if (pid < 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    throw_error(ErrorCode::External, "fork failed");
  }
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(out_pipe[1], STDERR_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    if (chdir(dir.c_str()) != 0) _exit(126);
    execlp(opt.exe_path.c_str(), opt.exe_path.c_str(), (char*)nullptr);
    _exit(127);
  }

  close(in_pipe[0]);
  close(out_pipe[1]);

  SigpipeGuard sigpipe;
  {
    size_t off = 0;
    while (off < script.size()) {
      const ssize_t k =
          write(in_pipe[1], script.data() + off, script.size() - off);
      if (k < 0) {
        if (errno == EINTR) continue;
        break;  // child went away early; its exit status tells the story
      }
      off += static_cast<size_t>(k);
    }
  }
  close(in_pipe[1]);

  using Clock = std::chrono::steady_clock;
  const auto deadline =
      Clock::now() + std::chrono::duration_cast<Clock::duration>(
                         std::chrono::duration<double>(opt.timeout_sec));
  std::string output;
  bool timed_out = false;
  char buf[4096];
  while (true) {
    const auto now = Clock::now();
    if (now >= deadline) {
      timed_out = true;
      break;
    }
    const auto left =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
            .count();
    pollfd p{out_pipe[0], POLLIN, 0};
    const int pr = poll(&p, 1, static_cast<int>(std::min<long long>(left, 200)));
    if (pr < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (pr == 0) continue;
    const ssize_t k = read(out_pipe[0], buf, sizeof buf);
    if (k > 0)
      output.append(buf, static_cast<size_t>(k));
    else
      break;
  }
  close(out_pipe[0]);

  int status = 0;
  if (timed_out) {
    kill(pid, SIGKILL);
    waitpid(pid, &status, 0);
    std::ostringstream os;
    os << "analysis exceeded " << opt.timeout_sec << "s and was killed";
    throw_error(ErrorCode::Timeout, os.str());
  }
  // Output is closed; give the process a moment to exit on its own.
  while (true) {
    const pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0 && errno != EINTR) break;
    if (Clock::now() >= deadline) {
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      throw_error(ErrorCode::Timeout, "analysis did not exit in time");
    }
    usleep(10000);
  }

  if (WIFEXITED(status) && WEXITSTATUS(status) == 127)
    throw_error(ErrorCode::External,
                "cannot run '" + opt.exe_path + "': executable not found");
  if (WIFEXITED(status) && WEXITSTATUS(status) == 126)
    throw_error(ErrorCode::External, "cannot enter workdir " + dir);

  const auto row = parse_polar_file(polar_path, fc.alpha_deg);
  if (!row) {
    if (!fs::exists(polar_path)) {
      std::string tail = output.size() > 400
                             ? output.substr(output.size() - 400)
                             : output;
      throw_error(ErrorCode::External,
                  "no polar output was produced; last output: " + tail);
    }
    PolarPoint pp;
    pp.source = "xfoil";
    pp.converged = false;
    return pp;
  }

  PolarPoint pp;
  pp.source = "xfoil";
  pp.converged = true;
  pp.cl = row->cl;
  pp.cd = row->cd;
  pp.ld = row->cd != 0.0 ? row->cl / row->cd : 0.0;
  return pp;
}

PerfEvaluator make_surrogate_evaluator(const FlowCondition& fc) {
  validate_flow_condition(fc);
  return [fc](const PolylineFoil& pf) { return surrogate_eval(pf, fc); };
}

PerfEvaluator make_xfoil_evaluator(const FlowCondition& fc,
                                   const XfoilOptions& opt) {
  validate_flow_condition(fc);
  return [fc, opt](const PolylineFoil& pf) { return xfoil_eval(pf, fc, opt); };
}

}  // namespace foilspace

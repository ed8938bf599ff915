// ortho-lab: command-line front end over the C interface.
#include <ortholab/ortholab.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using Json = nlohmann::ordered_json;

namespace {

using Rows = std::vector<std::vector<double>>;

struct InputError : std::runtime_error {
  InputError(std::string code, const std::string& message)
      : std::runtime_error(message), code(std::move(code)) {}
  std::string code;
};

struct SpaceDeleter {
  void operator()(ortho_space_t* s) const { ortho_space_free(s); }
};
struct SubspaceDeleter {
  void operator()(ortho_subspace_t* s) const { ortho_subspace_free(s); }
};
struct ReportDeleter {
  void operator()(ortho_report_t* r) const { ortho_report_free(r); }
};
using Space = std::unique_ptr<ortho_space_t, SpaceDeleter>;
using Sub = std::unique_ptr<ortho_subspace_t, SubspaceDeleter>;
using Report = std::unique_ptr<ortho_report_t, ReportDeleter>;

// Result of one library call: status plus whatever report came back.
struct Outcome {
  ortho_status status = ORTHO_OK;
  std::string message;
  Report report;
};

void check(ortho_status status) {
  if (status != ORTHO_OK) throw InputError(ortho_status_name(status), ortho_last_error());
}

// ---------------------------------------------------------------- input

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("invalid_argument", "cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Rows rows_from_json(const Json& j, const std::string& what) {
  Rows rows;
  auto vec = [&](const Json& a) {
    std::vector<double> row;
    for (const auto& x : a) {
      if (!x.is_number()) throw InputError("invalid_argument", what + ": entries must be numbers");
      row.push_back(x.get<double>());
    }
    return row;
  };
  if (!j.is_array() || j.empty()) throw InputError("invalid_argument", what + ": expected a nonempty array");
  if (j.front().is_array()) {
    for (const auto& r : j) {
      if (!r.is_array()) throw InputError("invalid_argument", what + ": mixed rows");
      rows.push_back(vec(r));
    }
  } else {
    rows.push_back(vec(j));
  }
  return rows;
}

Rows rows_from_text(const std::string& text, const std::string& what) {
  Rows rows;
  std::string body = text;
  std::replace(body.begin(), body.end(), ';', '\n');
  std::istringstream lines(body);
  std::string line;
  while (std::getline(lines, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::vector<double> row;
    std::string tok;
    while (fields >> tok) {
      char* end = nullptr;
      const double x = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0')
        throw InputError("invalid_argument", what + ": cannot parse '" + tok + "'");
      row.push_back(x);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

// Inline JSON, inline text ("1 1 0; 0 1 1"), or a file holding either.
Rows parse_rows(const std::string& arg, const std::string& what) {
  std::string text = arg;
  if (std::filesystem::is_regular_file(arg)) text = slurp(arg);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw InputError("invalid_argument", what + " is empty");
  Rows rows;
  if (text[first] == '[') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw InputError("invalid_argument", what + ": " + e.what());
    }
    rows = rows_from_json(j, what);
  } else {
    rows = rows_from_text(text, what);
  }
  if (rows.empty() || rows.front().empty()) throw InputError("invalid_argument", what + " is empty");
  for (const auto& r : rows) {
    if (r.size() != rows.front().size()) throw InputError("invalid_argument", what + ": ragged rows");
    for (double x : r)
      if (!std::isfinite(x)) throw InputError("invalid_argument", what + ": non-finite entry");
  }
  return rows;
}

Json rows_json(const Rows& rows) {
  Json j = Json::array();
  for (const auto& r : rows) j.push_back(r);
  return j;
}

// Column-major view for the C API: rows are the spanning vectors, so the
// n x k row-major matrix is their transpose.
std::vector<double> as_columns(const Rows& rows) {
  const size_t k = rows.size(), n = rows.front().size();
  std::vector<double> out(n * k);
  for (size_t j = 0; j < k; ++j)
    for (size_t i = 0; i < n; ++i) out[i * k + j] = rows[j][i];
  return out;
}

// ---------------------------------------------------------------- config

struct Options {
  std::string command;
  double p = 3.0;
  std::optional<int64_t> N;
  int64_t M = 0;
  uint64_t seed = 0;
  double tol = 1e-9;
  double opt_tol = 1e-8;
  double rank_tol = 1e-8;
  int64_t samples = 0;
  int64_t starts = 0;
  int64_t trials = 100;
  int64_t budget = 0;
  std::optional<int> threads;
  std::string out;
  std::string format = "json";

  // command arguments
  std::string v, L, L_ker, K, E, E_ker, F, g, gamma, trace;
  double eps = 0.0;
  std::vector<int64_t> coordinate;
  std::vector<int64_t> random;
  bool random_set = false;
  bool sweep = false;
  int64_t k = 2;
  int64_t threshold = 0;
  int64_t random_g = 0;
  int64_t dim_E = 0, dim_F = 0;
  int64_t kkm = 0;
  int64_t n = 3;
  int64_t grid = 0;
  int64_t m = 3;
  bool certify = false;
};

int resolve_threads(const std::optional<int>& flag) {
  if (flag) {
    if (*flag < 1) throw InputError("invalid_argument", "--threads must be >= 1");
    return *flag;
  }
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("ORTHO_LAB_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap < 1)
      throw InputError("invalid_argument", "ORTHO_LAB_THREADS must be a positive integer");
    n = std::min<int>(n, static_cast<int>(cap));
  }
  return n;
}

struct Run {
  const Options& opt;
  ortho_options_t lib{};
  Json config;
  int threads = 1;

  explicit Run(const Options& o) : opt(o) {
    for (double t : {o.tol, o.opt_tol, o.rank_tol})
      if (!(t > 0.0)) throw InputError("invalid_argument", "tolerances must be positive");
    if (!(o.p > 1.0) || !std::isfinite(o.p)) throw InputError("invalid_argument", "--p must exceed 1");
    if (o.samples < 0 || o.starts < 0 || o.trials < 1 || o.budget < 0 || o.M < 0)
      throw InputError("invalid_argument", "budgets must be nonnegative (trials >= 1)");
    threads = resolve_threads(o.threads);
    ortho_options_init(&lib);
    lib.seed = o.seed;
    lib.threads = threads;
    lib.opt_tol = o.opt_tol;
    lib.tol = o.tol;
    lib.rank_tol = o.rank_tol;
    lib.samples = o.samples;
    lib.starts = o.starts;
    lib.trials = o.trials;
    lib.budget = o.budget;
    lib.threshold = o.threshold;
    lib.eps = o.eps;
    lib.certify = o.certify ? 1 : 0;

    config["command"] = o.command;
    config["p"] = o.p;
    config["N"] = nullptr;
    config["M"] = o.M;
    config["rank_tol"] = o.rank_tol;
    config["opt_tol"] = o.opt_tol;
    config["tol"] = o.tol;
    config["samples"] = o.samples;
    config["starts"] = o.starts;
    config["trials"] = o.trials;
    config["budget"] = o.budget;
    config["seed"] = o.seed;
    config["threads"] = threads;
    config["out"] = o.out.empty() ? Json(nullptr) : Json(o.out);
    config["format"] = o.format;
  }

  // Resolves N from --N or from the length of an input vector.
  int64_t dim(int64_t inferred) {
    if (opt.N && *opt.N != inferred)
      throw InputError("dimension_mismatch", "--N " + std::to_string(*opt.N) +
                                                 " does not match input length " +
                                                 std::to_string(inferred));
    config["N"] = inferred;
    return inferred;
  }
  int64_t dim() {
    if (!opt.N) throw InputError("invalid_argument", "--N is required");
    if (*opt.N < 1) throw InputError("invalid_argument", "--N must be positive");
    config["N"] = *opt.N;
    return *opt.N;
  }

  Space space(int64_t n) {
    ortho_space_t* s = nullptr;
    if (opt.M > 0) {
      check(ortho_space_l01(opt.p, opt.M, &s));
      if (ortho_space_dim(s) != n) {
        ortho_space_free(s);
        throw InputError("dimension_mismatch", "vectors must have M entries in L^p(0,1)");
      }
    } else {
      check(ortho_space_finite(n, opt.p, &s));
    }
    return Space(s);
  }

  Sub span(const Rows& rows) {
    ortho_subspace_t* s = nullptr;
    const auto data = as_columns(rows);
    check(ortho_subspace_span(data.data(), static_cast<int64_t>(rows.front().size()),
                              static_cast<int64_t>(rows.size()), &s));
    return Sub(s);
  }
  Sub kernel(const Rows& rows) {
    ortho_subspace_t* s = nullptr;
    const auto data = as_columns(rows);
    check(ortho_subspace_kernel(data.data(), static_cast<int64_t>(rows.front().size()),
                                static_cast<int64_t>(rows.size()), &s));
    return Sub(s);
  }
  Sub random(int64_t n, int64_t k, uint64_t seed) {
    ortho_subspace_t* s = nullptr;
    check(ortho_subspace_random(n, k, seed, &s));
    return Sub(s);
  }

  // Subspace from --X (spanning vectors) or --X-ker (annihilating functionals).
  Sub subspace(const std::string& name, const std::string& span_arg, const std::string& ker_arg,
               std::optional<int64_t> n = std::nullopt) {
    if (!span_arg.empty() && !ker_arg.empty())
      throw InputError("invalid_argument", "give only one of --" + name + " and --" + name + "-ker");
    if (span_arg.empty() && ker_arg.empty())
      throw InputError("invalid_argument", "--" + name + " is required");
    const bool is_ker = span_arg.empty();
    const Rows rows = parse_rows(is_ker ? ker_arg : span_arg, "--" + name + (is_ker ? "-ker" : ""));
    if (n && static_cast<int64_t>(rows.front().size()) != *n)
      throw InputError("dimension_mismatch", "--" + name + " vectors must have length " + std::to_string(*n));
    config[is_ker ? name + "_ker" : name] = rows_json(rows);
    return is_ker ? kernel(rows) : span(rows);
  }

  std::vector<double> vector_arg(const std::string& arg, const std::string& name) {
    const Rows rows = parse_rows(arg, name);
    std::vector<double> v;
    for (const auto& r : rows) v.insert(v.end(), r.begin(), r.end());
    config[name.substr(2)] = v;
    return v;
  }
};

// f(&report) -> status
template <class F>
Outcome call(F&& f) {
  ortho_report_t* report = nullptr;
  Outcome o;
  o.status = f(&report);
  o.report.reset(report);
  if (o.status != ORTHO_OK) o.message = ortho_last_error();
  return o;
}

// ---------------------------------------------------------------- commands

Outcome cmd_project(Run& run, bool distance_only) {
  if (run.opt.v.empty()) throw InputError("invalid_argument", "--v is required");
  const auto v = run.vector_arg(run.opt.v, "--v");
  const int64_t n = run.dim(static_cast<int64_t>(v.size()));
  const Space space = run.space(n);
  const Sub L = run.subspace("L", run.opt.L, run.opt.L_ker, n);
  return call([&](ortho_report_t** r) {
    return distance_only ? ortho_distance(space.get(), v.data(), L.get(), &run.lib, r)
                         : ortho_project(space.get(), v.data(), L.get(), &run.lib, r);
  });
}

Outcome cmd_ortho_test(Run& run) {
  if (run.opt.v.empty() == run.opt.K.empty())
    throw InputError("invalid_argument", "give exactly one of --v and --K");
  run.config["eps"] = run.opt.eps;
  if (!run.opt.v.empty()) {
    const auto v = run.vector_arg(run.opt.v, "--v");
    const int64_t n = run.dim(static_cast<int64_t>(v.size()));
    const Space space = run.space(n);
    const Sub E = run.subspace("E", run.opt.E, run.opt.E_ker, n);
    return call([&](ortho_report_t** r) {
      return ortho_test_vector(space.get(), v.data(), E.get(), &run.lib, r);
    });
  }
  const Sub K = run.subspace("K", run.opt.K, "");
  const int64_t n = run.dim(ortho_subspace_ambient_dim(K.get()));
  const Space space = run.space(n);
  const Sub E = run.subspace("E", run.opt.E, run.opt.E_ker, n);
  return call([&](ortho_report_t** r) {
    return ortho_test_subspace(space.get(), K.get(), E.get(), &run.lib, r);
  });
}

Outcome cmd_badness(Run& run) {
  const auto& o = run.opt;
  const int modes = !o.gamma.empty() + !o.coordinate.empty() + o.random_set + o.sweep;
  if (modes != 1)
    throw InputError("invalid_argument", "give exactly one of --gamma, --coordinate, --random, --sweep");
  if (o.M > 0) throw InputError("invalid_argument", "badness works in l^p_N (no --M)");
  run.config["threshold"] = o.threshold;

  int64_t k = o.k;
  int64_t n = 0;
  if (o.random_set && !o.random.empty()) {
    if (o.random.size() != 2) throw InputError("invalid_argument", "--random takes N and k");
    n = run.dim(o.random[0]);
    k = o.random[1];
  }
  run.config["k"] = k;

  if (o.sweep) {
    n = run.dim();
    return call([&](ortho_report_t** r) { return ortho_badness_sweep(o.p, n, k, &run.lib, r); });
  }
  Sub L;
  if (!o.gamma.empty()) {
    const Rows gamma = parse_rows(o.gamma, "--gamma");
    if (gamma.front().size() != 2) throw InputError("invalid_argument", "--gamma must have two columns");
    n = run.dim(static_cast<int64_t>(gamma.size()) + 2);
    run.config["gamma"] = rows_json(gamma);
    run.config["k"] = 2;
    std::vector<double> flat;
    for (const auto& row : gamma) flat.insert(flat.end(), row.begin(), row.end());
    ortho_subspace_t* s = nullptr;
    check(ortho_subspace_gamma(flat.data(), n, &s));
    L.reset(s);
  } else if (!o.coordinate.empty()) {
    n = run.dim();
    std::vector<int64_t> axes;
    for (int64_t i : o.coordinate) {
      if (i < 1 || i > n) throw InputError("invalid_argument", "--coordinate indices are 1-based, within 1..N");
      axes.push_back(i - 1);
    }
    run.config["coordinate"] = o.coordinate;
    run.config["k"] = static_cast<int64_t>(axes.size());
    ortho_subspace_t* s = nullptr;
    check(ortho_subspace_coordinate(n, axes.data(), static_cast<int64_t>(axes.size()), &s));
    L.reset(s);
  } else {
    if (!n) n = run.dim();
    L = run.random(n, k, o.seed);
  }
  const Space space = run.space(n);
  return call([&](ortho_report_t** r) { return ortho_badness(space.get(), L.get(), &run.lib, r); });
}

Outcome cmd_certify(Run& run) {
  const auto& o = run.opt;
  const int modes = !o.g.empty() + (o.random_g > 0) + (!o.E.empty() || !o.E_ker.empty());
  if (modes != 1) throw InputError("invalid_argument", "give exactly one of --g, --random-g, --E/--E-ker");
  run.config["k"] = o.k;
  Sub E;
  int64_t n = 0;
  if (!o.g.empty()) {
    const Rows g = parse_rows(o.g, "--g");
    n = run.dim(static_cast<int64_t>(g.front().size()));
    run.config["g"] = rows_json(g);
    E = run.kernel(g);
  } else if (o.random_g > 0) {
    n = run.dim();
    run.config["random_g"] = o.random_g;
    const Sub g = run.random(n, o.random_g, o.seed);
    std::vector<double> basis(static_cast<size_t>(n * o.random_g));
    check(ortho_subspace_basis(g.get(), basis.data(), basis.size()));
    ortho_subspace_t* s = nullptr;
    check(ortho_subspace_kernel(basis.data(), n, o.random_g, &s));
    E.reset(s);
  } else {
    E = run.subspace("E", o.E, o.E_ker);
    n = run.dim(ortho_subspace_ambient_dim(E.get()));
  }
  const Space space = run.space(n);
  return call([&](ortho_report_t** r) { return ortho_certify(space.get(), E.get(), o.k, &run.lib, r); });
}

Outcome cmd_borsuk(Run& run) {
  const auto& o = run.opt;
  Sub E, F;
  int64_t n = 0;
  if (o.dim_E > 0 || o.dim_F > 0) {
    n = run.dim();
    run.config["dim_E"] = o.dim_E;
    run.config["dim_F"] = o.dim_F;
    if (o.dim_E < 1 || o.dim_F < 1) throw InputError("invalid_argument", "--dim-E and --dim-F go together");
    E = run.random(n, o.dim_E, o.seed);
    F = run.random(n, o.dim_F, o.seed ^ 0x9e3779b97f4a7c15ULL);
  } else {
    E = run.subspace("E", o.E, o.E_ker);
    n = run.dim(ortho_subspace_ambient_dim(E.get()));
    F = run.subspace("F", o.F, "", n);
  }
  run.config["kkm"] = o.kkm;
  run.lib.trials = o.kkm;
  const Space space = run.space(n);
  return call([&](ortho_report_t** r) { return ortho_borsuk(space.get(), E.get(), F.get(), &run.lib, r); });
}

Outcome cmd_q1(Run& run, bool rank_only) {
  const auto& o = run.opt;
  const int64_t grid = o.grid > 0 ? o.grid : (o.M > 0 ? o.M : 2048);
  run.config["n"] = o.n;
  run.config["M"] = grid;
  run.config["samples"] = o.samples > 0 ? o.samples : 2000;
  run.config["p"] = 3.0;
  return call([&](ortho_report_t** r) {
    return rank_only ? ortho_rank_lemma(o.n, grid, &run.lib, r) : ortho_q1(o.n, grid, &run.lib, r);
  });
}

Outcome cmd_bookkeeping(Run& run) {
  const auto& o = run.opt;
  const int64_t n = o.N ? *o.N : 2 * o.m;
  run.config["N"] = n;
  run.config["m"] = o.m;
  run.config["k"] = o.k;
  run.config["certify"] = o.certify;
  return call([&](ortho_report_t** r) { return ortho_bookkeeping(o.m, o.k, n, &run.lib, r); });
}

// ---------------------------------------------------------------- output

void emit(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(opt.out, std::ios::binary);
  if (!out) throw InputError("invalid_argument", "cannot write " + opt.out);
  out << text;
}

int exit_code(ortho_status status) {
  if (status == ORTHO_OK) return 0;
  if (ortho_status_is_solver_failure(status)) return 2;
  if (status == ORTHO_INTERNAL) return 1;
  return 3;
}

Json envelope(const Json& config, uint64_t seed, double ms) {
  Json j;
  j["config"] = config;
  j["seed"] = seed;
  j["version"] = ortho_version();
  j["wall_time_ms"] = ms;
  return j;
}

int run_command(const Options& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  };
  std::optional<Run> run;
  Outcome result;
  try {
    run.emplace(opt);
    if (opt.command == "project") result = cmd_project(*run, false);
    else if (opt.command == "distance") result = cmd_project(*run, true);
    else if (opt.command == "ortho-test") result = cmd_ortho_test(*run);
    else if (opt.command == "badness") result = cmd_badness(*run);
    else if (opt.command == "certify") result = cmd_certify(*run);
    else if (opt.command == "borsuk") result = cmd_borsuk(*run);
    else if (opt.command == "q1") result = cmd_q1(*run, false);
    else if (opt.command == "rank-lemma") result = cmd_q1(*run, true);
    else if (opt.command == "bookkeeping") result = cmd_bookkeeping(*run);
  } catch (const InputError& e) {
    Json j = envelope(run ? run->config : Json{{"command", opt.command}}, opt.seed, elapsed());
    j["error"] = {{"code", e.code}, {"message", e.what()}};
    std::cerr << "error: " << e.what() << "\n";
    try {
      emit(opt, j.dump(2) + "\n");
    } catch (const InputError&) {
      std::cout << j.dump(2) << "\n";
    }
    return 3;
  }

  const std::string body = result.report ? ortho_report_json(result.report.get()) : "null";
  const std::string csv = result.report ? ortho_report_csv(result.report.get()) : "";
  Json j = envelope(run->config, opt.seed, elapsed());
  if (result.status != ORTHO_OK) {
    j["error"] = {{"code", ortho_status_name(result.status)}, {"message", result.message}};
    std::cerr << "error: " << result.message << "\n";
  }
  j["report"] = Json::parse(body);

  try {
    if (!opt.trace.empty() && !csv.empty()) {
      std::ofstream t(opt.trace, std::ios::binary);
      if (!t) throw InputError("invalid_argument", "cannot write " + opt.trace);
      t << csv;
    }
    if (opt.format == "csv") {
      if (csv.empty() && result.status == ORTHO_OK)
        throw InputError("invalid_argument", opt.command + " has no CSV output");
      emit(opt, csv);
    } else {
      emit(opt, j.dump(2) + "\n");
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return exit_code(result.status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ortho-lab: orthogonality of subspaces in l^p spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ortho_version()));
  app.footer(
      "Matrices: inline JSON ('[[1,1,0],[0,1,1]]'), inline text ('1 1 0; 0 1 1'),\n"
      "or a file holding either. Each row is one vector; a subspace is the span\n"
      "of its rows (--X) or the common kernel of its rows (--X-ker).\n"
      "\n"
      "CSV output (--format csv):\n"
      "  badness --sweep   trial,seed,rank,is_bad\n"
      "  certify           start_id,seed,kind,value,iterations,finished\n"
      "\n"
      "Exit codes: 0 success, 2 solver did not converge (best result in\n"
      "\"report\"), 3 input error. Errors carry {\"error\": {\"code\", \"message\"}}.\n"
      "ORTHO_LAB_THREADS caps the worker count; --threads overrides it.");

  Options opt;
  app.add_option("--p", opt.p, "Exponent p > 1")->capture_default_str();
  app.add_option("--N", opt.N, "Ambient dimension");
  app.add_option("--M", opt.M, "Grid size; > 0 selects L^p(0,1) instead of l^p_N");
  app.add_option("--seed", opt.seed, "Master seed (64-bit)")->capture_default_str();
  app.add_option("--tol", opt.tol, "Orthogonality residual tolerance")->capture_default_str();
  app.add_option("--opt-tol", opt.opt_tol, "Projection optimality tolerance")->capture_default_str();
  app.add_option("--rank-tol", opt.rank_tol, "Relative rank tolerance")->capture_default_str();
  app.add_option("--samples", opt.samples, "Sample count (0: module default)");
  app.add_option("--starts", opt.starts, "Search starts / restarts (0: module default)");
  app.add_option("--trials", opt.trials, "Sweep trials")->capture_default_str();
  app.add_option("--threads", opt.threads, "Worker count");
  app.add_option("--out", opt.out, "Output file (default stdout)");
  app.add_option("--format", opt.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    s->callback([&opt, name] { opt.command = name; });
    return s;
  };

  for (const char* name : {"project", "distance"}) {
    CLI::App* s = sub(name, std::string(name) == "project" ? "Metric projection of v onto L"
                                                           : "Distance from v to L");
    s->add_option("--v", opt.v, "Vector")->required();
    s->add_option("--L", opt.L, "Spanning vectors of L");
    s->add_option("--L-ker", opt.L_ker, "Functionals cutting out L");
  }

  CLI::App* test = sub("ortho-test", "Is v (or K) orthogonal to E?");
  test->add_option("--v", opt.v, "Vector");
  test->add_option("--K", opt.K, "Spanning vectors of K");
  test->add_option("--E", opt.E, "Spanning vectors of E");
  test->add_option("--E-ker", opt.E_ker, "Functionals cutting out E");
  test->add_option("--eps", opt.eps, "eps for (1 - eps)-orthogonality of K")->capture_default_str();

  CLI::App* bad = sub("badness", "Normal-span classification of a section");
  bad->add_option("--gamma", opt.gamma, "(N-2) x 2 chart coefficients");
  bad->add_option("--coordinate", opt.coordinate, "1-based coordinate axes");
  bad->add_option("--random", opt.random, "Random section [N k]")->expected(0, 2);
  bad->add_flag("--sweep", opt.sweep, "Classify --trials random sections (CSV rows)");
  bad->add_option("--k", opt.k, "Section dimension")->capture_default_str();
  bad->add_option("--threshold", opt.threshold, "Bad when rank < threshold (0: default)");

  CLI::App* cert = sub("certify", "Search for a k-plane orthogonal to E");
  cert->add_option("--g", opt.g, "Spanning vectors of g; E = ker g");
  cert->add_option("--random-g", opt.random_g, "Random m-dimensional g");
  cert->add_option("--E", opt.E, "Spanning vectors of E");
  cert->add_option("--E-ker", opt.E_ker, "Functionals cutting out E");
  cert->add_option("--k", opt.k, "Dimension of K")->capture_default_str();
  cert->add_option("--budget", opt.budget, "Evaluations per simplex run (0: default)");
  cert->add_option("--trace", opt.trace, "Also write the per-start CSV trace here");

  CLI::App* bor = sub("borsuk", "Unit vector of F orthogonal to E (dim E < dim F)");
  bor->add_option("--E", opt.E, "Spanning vectors of E");
  bor->add_option("--E-ker", opt.E_ker, "Functionals cutting out E");
  bor->add_option("--F", opt.F, "Spanning vectors of F");
  bor->add_option("--dim-E", opt.dim_E, "Random E of this dimension");
  bor->add_option("--dim-F", opt.dim_F, "Random F of this dimension");
  bor->add_option("--kkm", opt.kkm, "Also run this many seeded existence trials");

  for (const char* name : {"q1", "rank-lemma"}) {
    CLI::App* s = sub(name, std::string(name) == "q1" ? "L^3(0,1) construction with separated F"
                                                      : "Rank of the sampled duality-map images");
    s->add_option("--n", opt.n, "Polynomial degree bound n (E_n = degree <= n-1)")->capture_default_str();
    s->add_option("--grid", opt.grid, "Grid size M (default 2048)");
  }

  CLI::App* book = sub("bookkeeping", "Exponent and construction for (m, k)");
  book->add_option("--m", opt.m, "dim g")->capture_default_str();
  book->add_option("--k", opt.k, "dim K")->capture_default_str();
  book->add_flag("--certify", opt.certify, "Also certify the construction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    Json j{{"error", {{"code", "invalid_argument"}, {"message", e.what()}}}};
    std::cout << j.dump(2) << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  opt.random_set = app.got_subcommand("badness") && app.get_subcommand("badness")->count("--random") > 0;
  return run_command(opt);
}

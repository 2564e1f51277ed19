// Command-line front end: JSON/CSV I/O around the library operations.
// Exit codes: 0 success, 2 input validation, 3 numerical non-convergence or
// internal inconsistency.
#include <CLI11.hpp>

#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "qell/json_io.hpp"

using namespace qell;

namespace {

struct SplitMix {
  uint64_t s;
  explicit SplitMix(uint64_t seed) : s(seed) {}
  uint64_t next() {
    s += 0x9E3779B97f4A7C15ULL;
    uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  cx rand_cx() { return cx{2.0 * uniform() - 1.0, 2.0 * uniform() - 1.0}; }
};

cx parse_cx(const std::string& s) {
  std::istringstream is(s);
  double re = 0, im = 0;
  char comma = 0;
  if (!(is >> re)) throw error(errc::domain_error, "cannot parse complex value '" + s + "'");
  if (is >> comma) {
    if (comma != ',' || !(is >> im))
      throw error(errc::domain_error, "complex values are 're,im' pairs: '" + s + "'");
  }
  return cx{re, im};
}

std::vector<cx> parse_cx_vector(const std::string& s) {
  std::vector<cx> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';'))
    if (!item.empty()) out.push_back(parse_cx(item));
  return out;
}

struct RunConfig {
  std::string q = "0.1";
  std::string eta = "0.8";
  int k = 2;
  int window = 0;  // 0: derived as max(4k, 24)
  double tol = 1e-9;
  uint64_t seed = 42;
  std::string xspec;
  std::string input;
  std::string output;
  std::string format = "json";

  cx qv, etav;

  void resolve() {
    qv = parse_cx(q);
    etav = parse_cx(eta);
    if (window == 0) window = std::max(4 * k, 24);
    if (!(std::abs(qv) > 0.0 && std::abs(qv) < 1.0))
      throw error(errc::domain_error, "require 0 < |q| < 1");
    if (etav == cx{0.0, 0.0}) throw error(errc::domain_error, "eta must be nonzero");
    if (k < 1) throw error(errc::domain_error, "k must be >= 1");
    if (window < 4 * k) throw error(errc::domain_error, "window must be >= 4k");
    if (!(tol > 0.0 && tol <= 1e-3)) throw error(errc::domain_error, "tol must lie in (0, 1e-3]");
  }

  NumericContext ctx() const { return NumericContext{qv, tol, window}; }

  ExtensionClass resolve_x() const {
    std::vector<cx> coords;
    if (!input.empty()) {
      std::ifstream in(input);
      if (!in) throw error(errc::domain_error, "cannot open input file " + input);
      json j = json::parse(in);
      coords = cxvec_from_json(j.is_object() ? j.at("coords") : j);
    } else if (!xspec.empty()) {
      coords = parse_cx_vector(xspec);
    } else {
      SplitMix rng(seed);
      coords.resize(2 * k);
      for (auto& v : coords) v = rng.rand_cx();
    }
    if (static_cast<int>(coords.size()) != 2 * k)
      throw error(errc::domain_error, "x must have exactly 2k coordinates");
    return make_extension(k, etav, std::move(coords));
  }

  void emit(const std::string& text) const {
    if (output.empty()) {
      std::cout << text << "\n";
    } else {
      std::ofstream out(output);
      if (!out) throw error(errc::domain_error, "cannot open output file " + output);
      out << text << "\n";
    }
  }
};

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--q", cfg.q, "modulus q as re,im (0 < |q| < 1)");
  cmd->add_option("--eta", cfg.eta, "eta as re,im");
  cmd->add_option("--k", cfg.k, "degree of the Levi line bundle xi0");
  cmd->add_option("--window", cfg.window, "exponent half-width (default max(4k, 24))");
  cmd->add_option("--tol", cfg.tol, "tolerance, in (0, 1e-3]");
  cmd->add_option("--seed", cfg.seed, "seed for random classes");
  cmd->add_option("--x", cfg.xspec, "class coordinates re,im;re,im;...");
  cmd->add_option("--input", cfg.input, "JSON file with {\"coords\": [[re,im],...]}");
  cmd->add_option("--output", cfg.output, "output path (default stdout)");
  cmd->add_option("--format", cfg.format, "json|csv (sweep only)");
}

int run_theta(RunConfig& cfg, int n) {
  cfg.resolve();
  NumericContext ctx = cfg.ctx();
  if (n < 0 || n >= cfg.k)
    throw error(errc::domain_error, "theta: need 0 <= n < k");
  LineBundle lb = line_bundle(ipow(cfg.etav, cfg.k), cfg.k, ctx);
  LaurentSeries th = theta_basis(lb, n, ctx);
  json out{{"bundle", to_json(lb)},
           {"n", n},
           {"residual", functional_residual(lb, th, ctx)},
           {"series", to_json(th)}};
  cfg.emit(out.dump(2));
  return 0;
}

int run_pair(RunConfig& cfg) {
  cfg.resolve();
  NumericContext ctx = cfg.ctx();
  LineBundle lb = line_bundle(ipow(cfg.etav, cfg.k), cfg.k, ctx);
  LineBundle dual = dual_bundle(lb);
  json mat = json::array(), fmat = json::array();
  double dev = 0.0;
  for (int n = 0; n < cfg.k; ++n) {
    json row = json::array(), frow = json::array();
    for (int m = 0; m < cfg.k; ++m) {
      std::vector<cx> em(cfg.k, cx{0.0, 0.0});
      em[m] = cx{1.0, 0.0};
      cx v = serre_pair_index(lb, -n, H1Class{dual, em}, ctx);
      cx f = theta_functional(lb, n, LaurentSeries::monomial(cx{1.0, 0.0}, m), ctx);
      row.push_back(to_json(v));
      frow.push_back(to_json(f));
      cx expect = (m == n) ? cx{1.0, 0.0} : cx{0.0, 0.0};
      dev = std::max({dev, std::abs(v - expect), std::abs(f - expect)});
    }
    mat.push_back(std::move(row));
    fmat.push_back(std::move(frow));
  }
  json out{{"bundle", to_json(lb)},
           {"pairing_matrix", std::move(mat)},
           {"functional_matrix", std::move(fmat)},
           {"identity_deviation", dev}};
  cfg.emit(out.dump(2));
  return 0;
}

int run_qdiff(RunConfig& cfg) {
  cfg.resolve();
  NumericContext ctx = cfg.ctx();
  ExtensionClass x = cfg.resolve_x();
  Multiplier ext = extension_multiplier(x, ctx);
  ExtensionClass back = extension_class_of(ext, ctx);
  double rt = 0.0;
  for (int i = 0; i < 2 * cfg.k; ++i) rt = std::max(rt, std::abs(back.coords[i] - x.coords[i]));
  json out{{"x", to_json(x)},
           {"extension_multiplier", to_json(ext)},
           {"dual_multiplier", to_json(dual_multiplier(ext, ctx))},
           {"end_multiplier", to_json(end_multiplier(x, ctx))},
           {"class_roundtrip_error", rt},
           {"parabolic_aut_dim", parabolic_aut_dim(x, ctx)}};
  cfg.emit(out.dump(2));
  return 0;
}

int run_bracket(RunConfig& cfg) {
  cfg.resolve();
  NumericContext ctx = cfg.ctx();
  ExtensionClass x = cfg.resolve_x();
  BracketMatrix bm = bracket_matrix(x, ctx);
  json out = to_json(bm);
  out["pi_rank"] = pi_rank(bm, ctx.tol);
  cfg.emit(out.dump(2));
  return 0;
}

int run_jacobi(RunConfig& cfg, int m, int n, int s, bool project, bool unrestricted) {
  cfg.resolve();
  NumericContext ctx = cfg.ctx();
  ExtensionClass x = cfg.resolve_x();
  if (project)
    for (int idx : {m, n, s}) {
      if (idx < 0 || idx >= 2 * cfg.k) throw error(errc::domain_error, "jacobi: index out of range");
      x.coords[idx] = cx{0.0, 0.0};
    }
  BracketTensor T = bracket_tensor(cfg.k, cfg.etav, ctx);
  cx value = unrestricted ? jacobiator_unrestricted(x, m, n, s, ctx, &T)
                          : jacobiator(x, m, n, s, ctx, &T);
  double scale = jacobiator_scale(x, ctx, &T);
  json out{{"x", to_json(x)},
           {"indices", json::array({m, n, s})},
           {"jacobiator", to_json(value)},
           {"scale", scale},
           {"relative", std::abs(value) / std::max(1e-300, scale)},
           {"unrestricted", unrestricted}};
  cfg.emit(out.dump(2));
  return 0;
}

int run_leaf(RunConfig& cfg) {
  cfg.resolve();
  NumericContext ctx = cfg.ctx();
  ExtensionClass x = cfg.resolve_x();
  StratumReport rep = instability_index(x, ctx);
  json out = to_json(rep);
  out["x"] = to_json(x);
  cfg.emit(out.dump(2));
  return 0;
}

int run_sweep(RunConfig& cfg, int samples, int threads) {
  cfg.resolve();
  NumericContext ctx = cfg.ctx();
  std::vector<StratumReport> reports(samples);
  std::vector<ExtensionClass> xs;
  xs.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    SplitMix rng(cfg.seed + 0x51ed2701ULL * static_cast<uint64_t>(i));
    std::vector<cx> coords(2 * cfg.k);
    for (auto& v : coords) v = rng.rand_cx();
    xs.push_back(make_extension(cfg.k, cfg.etav, std::move(coords)));
  }
  if (threads < 1) threads = 1;
  std::atomic<int> cursor{0};
  std::vector<std::thread> pool;
  std::vector<std::string> failures(samples);
  auto work = [&]() {
    for (;;) {
      int i = cursor.fetch_add(1);
      if (i >= samples) return;
      try {
        reports[i] = instability_index(xs[i], ctx);
      } catch (const error& e) {
        failures[i] = e.what();
      }
    }
  };
  for (int t = 0; t < threads; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  for (int i = 0; i < samples; ++i)
    if (!failures[i].empty())
      throw error(errc::non_convergence, "sweep sample " + std::to_string(i) + ": " + failures[i]);

  std::ostringstream os;
  if (cfg.format == "csv") {
    os << "# qell-sweep v1 k=" << cfg.k << " q=" << cfg.q << " eta=" << cfg.eta
       << " window=" << cfg.window << " tol=" << cfg.tol << " seed=" << cfg.seed << "\n";
    for (int i = 0; i < 2 * cfg.k; ++i) os << "x" << i << "_re,x" << i << "_im,";
    os << "index_j,leaf_dim,pi_rank,witness_re,witness_im\n";
    os.precision(17);
    for (int i = 0; i < samples; ++i) {
      for (cx v : xs[i].coords) os << v.real() << "," << v.imag() << ",";
      os << reports[i].index_j << "," << reports[i].leaf_dim << "," << reports[i].pi_rank << ",";
      if (reports[i].witness)
        os << reports[i].witness->cParam.real() << "," << reports[i].witness->cParam.imag();
      else
        os << ",";
      os << "\n";
    }
  } else {
    json arr = json::array();
    for (int i = 0; i < samples; ++i) {
      json row = to_json(reports[i]);
      row["x"] = to_json(xs[i].coords);
      arr.push_back(std::move(row));
    }
    os << arr.dump(2);
  }
  cfg.emit(os.str());
  return 0;
}

int run_loop_compare(RunConfig& cfg, int samples) {
  cfg.resolve();
  NumericContext ctx = cfg.ctx();
  if (!cfg.xspec.empty() || !cfg.input.empty()) {
    ExtensionClass x = cfg.resolve_x();
    auto cmp = compare_brackets(x, ctx);
    if (!cmp) {
      cfg.emit(json{{"skipped", true}, {"reason", "zero class: both brackets vanish"}}.dump(2));
      return 0;
    }
    cfg.emit(to_json(*cmp).dump(2));
    return 0;
  }
  cx ratio{0.0, 0.0};
  double worst = 0.0;
  int entries = 0;
  for (int i = 0; i < samples; ++i) {
    SplitMix rng(cfg.seed + 0x9e3779b9ULL * static_cast<uint64_t>(i));
    std::vector<cx> coords(2 * cfg.k);
    for (auto& v : coords) v = rng.rand_cx();
    auto cmp = compare_brackets(make_extension(cfg.k, cfg.etav, std::move(coords)), ctx);
    if (!cmp) continue;
    if (entries == 0)
      ratio = cmp->ratio;
    else if (std::abs(cmp->ratio - ratio) > 100.0 * ctx.tol * std::abs(ratio))
      throw error(errc::comparison_failure, "loop-compare: ratio varies across samples");
    worst = std::max({worst, cmp->max_residual,
                      std::abs(cmp->ratio - ratio) / std::max(1e-300, std::abs(ratio))});
    entries += cmp->entries_compared;
  }
  json out{{"ratio", to_json(ratio)},
           {"max_residual", worst},
           {"entries_compared", entries},
           {"samples", samples}};
  cfg.emit(out.dump(2));
  return 0;
}

int exit_code_for(const error& e) {
  switch (e.kind()) {
    case errc::window_underflow:
    case errc::domain_error:
    case errc::invalid_section:
    case errc::invalid_covector:
      return 2;
    default:
      return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical verification of the Poisson structure on SL2 parabolic bundles over E_q"};
  app.require_subcommand(1);
  RunConfig cfg;

  int theta_n = 0;
  auto* c_theta = app.add_subcommand("theta", "theta basis of xi0 and its residual");
  add_common(c_theta, cfg);
  c_theta->add_option("--n", theta_n, "basis index, 0 <= n < k");

  auto* c_pair = app.add_subcommand("pair", "Serre pairing matrix against the canonical classes");
  add_common(c_pair, cfg);

  auto* c_qdiff = app.add_subcommand("qdiff", "rank-two multipliers attached to a class");
  add_common(c_qdiff, cfg);

  auto* c_bracket = app.add_subcommand("bracket", "Poisson bracket matrix at a class");
  add_common(c_bracket, cfg);

  int jm = 0, jn = 1, js = 2;
  bool jproject = false, junrestricted = false;
  auto* c_jacobi = app.add_subcommand("jacobi", "Jacobiator at a class");
  add_common(c_jacobi, cfg);
  c_jacobi->add_option("--m", jm);
  c_jacobi->add_option("--n", jn);
  c_jacobi->add_option("--s", js);
  c_jacobi->add_flag("--project", jproject, "zero the three chosen coordinates first");
  c_jacobi->add_flag("--unrestricted", junrestricted,
                     "evaluate off the admissible locus (diagnostic only)");

  auto* c_leaf = app.add_subcommand("leaf", "instability index and leaf data of one class");
  add_common(c_leaf, cfg);

  int samples = 200, threads = static_cast<int>(std::thread::hardware_concurrency());
  auto* c_sweep = app.add_subcommand("sweep", "stratify random classes; CSV or JSON");
  add_common(c_sweep, cfg);
  c_sweep->add_option("--samples", samples);
  c_sweep->add_option("--threads", threads);

  int lc_samples = 10;
  auto* c_loop = app.add_subcommand("loop-compare", "loop r-matrix bracket vs sheaf bracket");
  add_common(c_loop, cfg);
  c_loop->add_option("--samples", lc_samples);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (c_theta->parsed()) return run_theta(cfg, theta_n);
    if (c_pair->parsed()) return run_pair(cfg);
    if (c_qdiff->parsed()) return run_qdiff(cfg);
    if (c_bracket->parsed()) return run_bracket(cfg);
    if (c_jacobi->parsed()) return run_jacobi(cfg, jm, jn, js, jproject, junrestricted);
    if (c_leaf->parsed()) return run_leaf(cfg);
    if (c_sweep->parsed()) return run_sweep(cfg, samples, threads);
    if (c_loop->parsed()) return run_loop_compare(cfg, lc_samples);
  } catch (const error& e) {
    std::cerr << "error (" << errc_name(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

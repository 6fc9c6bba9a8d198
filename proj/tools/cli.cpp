#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "wavebasis/cauchy_solver.hpp"
#include "wavebasis/errors.hpp"
#include "wavebasis/klein_gordon.hpp"
#include "wavebasis/modes.hpp"

namespace wavebasis::cli {

namespace {

using json = nlohmann::json;

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void dump_rec(const json& j, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? "\n" + std::string(indent * (depth + 1), ' ') : "";
  const std::string close = indent > 0 ? "\n" + std::string(indent * depth, ' ') : "";
  const std::string sep = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",";
        first = false;
        out += pad + json(it.key()).dump() + sep;
        dump_rec(it.value(), indent, depth + 1, out);
      }
      out += close + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",";
        first = false;
        out += pad;
        dump_rec(v, indent, depth + 1, out);
      }
      out += close + "]";
      return;
    }
    case json::value_t::number_float:
      out += fmt17(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

// Turns a JSON config object into command-line tokens.  They are placed before
// the user's own flags, and every option takes its last value, so flags win.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  std::vector<std::string> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string flag = "--" + it.key();
    const json& v = it.value();
    if (v.is_boolean()) {
      if (v.get<bool>()) out.push_back(flag);
    } else if (v.is_array()) {
      for (const auto& x : v) {
        out.push_back(flag);
        out.push_back(x.is_string() ? x.get<std::string>() : x.dump());
      }
    } else {
      out.push_back(flag);
      out.push_back(v.is_string() ? v.get<std::string>() : (v.is_number_float() ? fmt17(v.get<double>()) : v.dump()));
    }
  }
  return out;
}

// Output sink: a file when a path is given, else the command's stream.
void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
  const char* eol = !text.empty() && text.back() == '\n' ? "" : "\n";
  if (path.empty()) {
    fallback << text << eol;
    return;
  }
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write " + path);
  f << text << eol;
}

int default_m(int n) { return ((1 - n) % 4 + 4) % 4; }

void require_sector(int n, int m) {
  if (sector(n, m) == Sector::ZERO) {
    throw UsageError("sector(n=" + std::to_string(n) + ", m=" + std::to_string(m) +
                     ") is ZERO: ker □ has no solutions for this m");
  }
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open data file " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

CauchyData parse_data(const std::string& spec, int n) {
  if (spec == "gaussian") return CauchyData::gaussian(n);
  if (spec.rfind("gaussian:", 0) == 0) return CauchyData::gaussian(n, std::stod(spec.substr(9)));
  if (spec.rfind("mode:", 0) == 0) {
    int p = 0, l = 0, j = 0;
    if (std::sscanf(spec.c_str() + 5, "%d,%d,%d", &p, &l, &j) != 3) throw UsageError("--data mode:p,l,j expected");
    const ModeIndex idx{p, l, j};
    if (!is_valid_index(n, idx) || p <= 0) throw UsageError("--data: invalid mode index");
    return CauchyData::from_mode(idx, n);
  }
  const std::string path = spec.rfind("file:", 0) == 0 ? spec.substr(5) : spec;
  const auto rows = read_csv(path);
  if (rows.size() < 2) throw UsageError("data file " + path + " has no samples");
  std::vector<std::vector<double>> pts;
  std::vector<double> phi, psi;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (static_cast<int>(rows[i].size()) != n + 2) throw UsageError("data file: expected x1..xn,Phi,Psi per row");
    std::vector<double> x;
    for (int k = 0; k < n; ++k) x.push_back(std::stod(rows[i][k]));
    pts.push_back(std::move(x));
    phi.push_back(std::stod(rows[i][n]));
    psi.push_back(std::stod(rows[i][n + 1]));
  }
  return CauchyData::from_samples(n, pts, phi, psi);
}

json expansion_report(const Expansion& e, int decay_N) {
  json j = json::parse(e.to_json());
  json dp = json::array();
  for (const auto& d : decay_profile(e, decay_N)) {
    dp.push_back({{"N", d.N},
                  {"partial_sum", d.partial_sums.empty() ? 0.0 : d.partial_sums.back()},
                  {"convergent", d.convergent}});
  }
  j["decay_profile"] = dp;
  return j;
}

struct Common {
  int n = 3;
  int m = -1;
  int p_max = 12;
  std::uint64_t seed = 1;
  std::string out;
  std::string config;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--n", c.n, "spatial dimension (>= 2)")->check(CLI::Range(2, 7));
  sub->add_option("--pmax", c.p_max, "largest energy p");
  sub->add_option("--seed", c.seed, "seed for random samples");
  sub->add_option("--out", c.out, "output path");
  sub->add_option("--config", c.config, "JSON config file (flags override it)");
}

}  // namespace

std::string dump_json(const json& j, int indent) {
  std::string out;
  dump_rec(j, indent, 0, out);
  return out;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  // Splice config-file tokens in right after the subcommand name.
  std::vector<std::string> args = raw_args;
  try {
    for (std::size_t i = 1; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) {
        const auto extra = config_tokens(args[i + 1]);
        args.insert(args.begin() + std::min<std::size_t>(2, args.size()), extra.begin(), extra.end());
        break;
      }
      if (args[i].rfind("--config=", 0) == 0) {
        const auto extra = config_tokens(args[i].substr(9));
        args.insert(args.begin() + std::min<std::size_t>(2, args.size()), extra.begin(), extra.end());
        break;
      }
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"Orthonormal mode basis for the wave equation on R^{1,n}", "wavebasis"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  Common c;
  std::string cert_path;
  int samples = 20;
  std::string picture = "compact";
  std::string data = "gaussian";
  std::string route = "compact";
  double t = 0.0;
  double radius = 2.0;
  int theta_nodes = 0, sphere_degree = 0;
  int decay_N = 6;
  std::string emit_nodes;
  double h = 0.2, cfl = 0.5, R = 1.0, tol = 5e-3, t_final = 1.0;

  auto* basis = app.add_subcommand("basis", "list modes (CSV: p,l,j,d,norm_constant)");
  add_common(basis, c);
  basis->add_option("--certificates", cert_path, "write exact rational certificates (n odd) to this JSON file");

  auto* verify = app.add_subcommand("verify", "run the identity suite and report residuals (JSON)");
  add_common(verify, c);
  verify->add_option("--samples", samples, "random samples per identity")->check(CLI::PositiveNumber);

  auto* gram = app.add_subcommand("gram", "Klein-Gordon Gram matrix of the modes allowed for (n, m)");
  add_common(gram, c);
  gram->add_option("--m", c.m, "representation parameter m mod 4");
  gram->add_option("--picture", picture, "compact or noncompact")->check(CLI::IsMember({"compact", "noncompact"}));
  gram->add_option("--tol", tol, "tolerance on |G - diag(+-1)|");

  auto add_data = [&](CLI::App* sub) {
    sub->add_option("--m", c.m, "representation parameter m mod 4");
    sub->add_option("--data", data, "gaussian[:width] | mode:p,l,j | file:path");
    sub->add_option("--route", route, "compact or noncompact")->check(CLI::IsMember({"compact", "noncompact"}));
    sub->add_option("--theta-nodes", theta_nodes, "polar quadrature nodes (0: automatic)");
    sub->add_option("--sphere-degree", sphere_degree, "sphere grid degree (0: automatic)");
  };
  auto* expand_cmd = app.add_subcommand("expand", "expansion coefficients of Cauchy data (JSON)");
  add_common(expand_cmd, c);
  add_data(expand_cmd);
  expand_cmd->add_option("--decay-n", decay_N, "largest N in the p^N decay profile");
  expand_cmd->add_option("--emit-nodes", emit_nodes, "write the quadrature nodes a data file must cover (CSV)");

  auto* solve = app.add_subcommand("solve", "expand and reconstruct u at time t");
  add_common(solve, c);
  add_data(solve);
  solve->add_option("--t", t, "evaluation time");
  solve->add_option("--samples", samples, "reconstruction points")->check(CLI::PositiveNumber);
  solve->add_option("--radius", radius, "points drawn from [-radius, radius]^n");

  auto* evolve = app.add_subcommand("evolve-compare", "spectral solution vs finite differences (n <= 3)");
  add_common(evolve, c);
  evolve->add_option("--data", data, "gaussian[:width] | mode:p,l,j");
  evolve->add_option("--t", t_final, "final time");
  evolve->add_option("--dx", h, "coarse grid spacing");
  evolve->add_option("--cfl", cfl, "dt / h");
  evolve->add_option("--R", R, "comparison region [-R, R]^n");
  evolve->add_option("--tol", tol, "tolerance on the finest sup discrepancy");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (c.m < 0) c.m = default_m(c.n);
    c.m %= 4;

    if (*basis) {
      std::ostringstream csv;
      csv.precision(17);
      csv << "p,l,j,d,norm_constant\n";
      for (const auto& idx : enumerate_modes(c.n, c.p_max)) {
        const ModeFunction mf(c.n, idx);
        csv << idx.p << "," << idx.l << "," << idx.j << "," << mf.d() << "," << fmt17(mf.norm_constant()) << "\n";
      }
      std::string text = csv.str();
      text.pop_back();
      emit(c.out, text, out);
      if (!cert_path.empty()) {
        if (c.n % 2 == 0) throw UsageError("--certificates needs odd n");
        json certs = json::array();
        for (const auto& idx : enumerate_modes(c.n, c.p_max)) certs.push_back(json::parse(rational_mode(idx, c.n).to_json()));
        emit(cert_path, dump_json(certs), out);
      }
      return 0;
    }

    if (*verify) {
      const json rep = run_verify({c.n, c.p_max, samples, c.seed});
      emit(c.out, dump_json(rep), out);
      return rep["pass"].get<bool>() ? 0 : 1;
    }

    if (*gram) {
      require_sector(c.n, c.m);
      const Sector s = sector(c.n, c.m);
      std::vector<ModeIndex> modes;
      for (const auto& idx : enumerate_modes(c.n, c.p_max)) {
        if (s == Sector::PLUS || s == Sector::BOTH) modes.push_back(idx);
      }
      for (const auto& idx : enumerate_modes(c.n, c.p_max)) {
        if (s == Sector::MINUS || s == Sector::BOTH) modes.push_back({-idx.p, idx.l, idx.j});
      }
      const Eigen::MatrixXcd G =
          gram_matrix(modes, c.n, picture == "compact" ? Picture::compact : Picture::noncompact);
      double off = 0.0, diag = 0.0;
      std::ostringstream csv;
      csv << "row,col,p1,l1,j1,p2,l2,j2,re,im\n";
      for (Eigen::Index a = 0; a < G.rows(); ++a) {
        for (Eigen::Index b = 0; b < G.cols(); ++b) {
          const double expect = a == b ? (modes[a].p > 0 ? 1.0 : -1.0) : 0.0;
          (a == b ? diag : off) = std::max(a == b ? diag : off, std::abs(G(a, b) - expect));
          csv << a << "," << b << "," << modes[a].p << "," << modes[a].l << "," << modes[a].j << "," << modes[b].p
              << "," << modes[b].l << "," << modes[b].j << "," << fmt17(G(a, b).real()) << ","
              << fmt17(G(a, b).imag()) << "\n";
        }
      }
      if (!c.out.empty()) emit(c.out, csv.str(), out);
      const bool pass = off <= tol && diag <= tol;
      const json rep{{"command", "gram"}, {"n", c.n},          {"m", c.m},
                     {"pmax", c.p_max},   {"picture", picture}, {"modes", modes.size()},
                     {"sector", to_string(s)}, {"max_offdiagonal", off}, {"max_diagonal_deviation", diag},
                     {"tolerance", tol},  {"pass", pass}};
      out << dump_json(rep) << "\n";
      return pass ? 0 : 1;
    }

    if (*expand_cmd || *solve) {
      require_sector(c.n, c.m);
      ExpandOptions opt;
      opt.route = route == "compact" ? ExpandRoute::compact : ExpandRoute::noncompact;
      opt.theta_nodes = theta_nodes;
      opt.sphere_degree = sphere_degree;
      if (*expand_cmd && !emit_nodes.empty()) {
        std::ostringstream csv;
        for (int i = 0; i < c.n; ++i) csv << (i ? "," : "") << "x" << i + 1;
        csv << ",Phi,Psi\n";
        for (const auto& x : expansion_nodes(c.n, c.p_max, opt)) {
          for (int i = 0; i < c.n; ++i) csv << (i ? "," : "") << fmt17(x[i]);
          csv << ",,\n";
        }
        emit(emit_nodes, csv.str(), out);
        return 0;
      }
      const CauchyData d = parse_data(data, c.n);
      Expansion e = expand(d, c.n, c.p_max, opt);
      e.m = c.m;
      json rep = expansion_report(e, decay_N);
      rep["seed"] = c.seed;
      rep["data"] = data;
      if (*expand_cmd) {
        emit(c.out, dump_json(rep), out);
        return 0;
      }
      std::mt19937_64 rng(c.seed);
      std::uniform_real_distribution<double> U(-radius, radius);
      std::vector<std::vector<double>> pts;
      for (int k = 0; k < samples; ++k) {
        std::vector<double> p{t};
        for (int i = 0; i < c.n; ++i) p.push_back(U(rng));
        pts.push_back(std::move(p));
      }
      const auto u = reconstruct(e, pts);
      std::ostringstream csv;
      csv << "t";
      for (int i = 0; i < c.n; ++i) csv << ",x" << i + 1;
      csv << ",u\n";
      for (std::size_t k = 0; k < pts.size(); ++k) {
        for (std::size_t i = 0; i < pts[k].size(); ++i) csv << (i ? "," : "") << fmt17(pts[k][i]);
        csv << "," << fmt17(u[k]) << "\n";
      }
      if (c.out.empty()) {
        out << dump_json(rep) << "\n" << csv.str();
      } else {
        emit(c.out + ".json", dump_json(rep), out);
        emit(c.out + ".csv", csv.str(), out);
      }
      return 0;
    }

    if (*evolve) {
      const CauchyData d = parse_data(data, c.n);
      const EvolveReport rep = evolve_compare(d, c.n, t_final, {h, cfl, R}, c.p_max);
      json j = json::parse(rep.to_json());
      const bool pass = rep.levels.back().sup_vs_spectral <= tol && rep.fd_dominated;
      j["command"] = "evolve-compare";
      j["pmax"] = c.p_max;
      j["data"] = data;
      j["tolerance"] = tol;
      j["pass"] = pass;
      emit(c.out, dump_json(j), out);
      return pass ? 0 : 1;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "check failed: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: malformed number (" << e.what() << ")\n";
    return 2;
  }
  return 2;
}

}  // namespace wavebasis::cli

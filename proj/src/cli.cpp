#include "sphrobin/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "sphrobin/convex_body.hpp"
#include "sphrobin/curvature_measures.hpp"
#include "sphrobin/discrete_robin.hpp"
#include "sphrobin/error.hpp"
#include "sphrobin/hyperbolic.hpp"
#include "sphrobin/parallel_coordinates.hpp"
#include "sphrobin/radial_eigensolver.hpp"
#include "sphrobin/spaceform.hpp"

namespace sphrobin::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

std::string num(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

struct NamedBody {
  std::string id;
  CapBody body;
};

struct BodySources {
  std::vector<std::string> files;
  std::vector<double> balls;
  bool octant = false;
  std::optional<std::uint64_t> random_seed;
  int count = 1;
  int k_min = 3;
  int k_max = 8;
  double spread = 0.5;

  void attach(CLI::App* app) {
    app->add_option("--body", files, "Body file (lines `pole_x pole_y pole_z rho`)");
    app->add_option("--ball", balls, "Geodesic ball of the given radius")->delimiter(',');
    app->add_flag("--octant", octant, "The positive octant");
    app->add_option("--random", random_seed, "First seed of a generated corpus");
    app->add_option("--count", count, "Number of generated bodies")->check(CLI::PositiveNumber);
    app->add_option("--k-min", k_min, "Fewest caps per generated body")->check(CLI::Range(3, 12));
    app->add_option("--k-max", k_max, "Most caps per generated body")->check(CLI::Range(3, 12));
    app->add_option("--spread", spread, "Pole spread of generated bodies");
  }

  std::vector<NamedBody> load() const {
    std::vector<NamedBody> bodies;
    for (const auto& f : files) bodies.push_back({f, read_body_file(f)});
    if (octant) bodies.push_back({"octant", octant_body()});
    for (double r : balls) bodies.push_back({"ball:" + num(r), ball_body(Vec3::UnitZ(), r)});
    if (random_seed) {
      if (k_max < k_min) throw PreconditionError("--k-max must be at least --k-min");
      for (int i = 0; i < count; ++i) {
        const std::uint64_t seed = *random_seed + i;
        const int k = k_min + static_cast<int>((seed - 1) % (k_max - k_min + 1));
        bodies.push_back({"random:" + std::to_string(seed) + ":k" + std::to_string(k),
                          random_body(seed, k, spread)});
      }
    }
    if (bodies.empty()) {
      throw PreconditionError("no body given (use --body, --octant, --ball or --random)");
    }
    return bodies;
  }
};

// Runs `task(i)` for i in [0, n) on up to `threads` workers; results keep
// input order.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, unsigned threads, F&& task) {
  std::vector<std::optional<T>> slots(n);
  threads = std::max(1u, threads);
  for (std::size_t begin = 0; begin < n; begin += threads) {
    std::vector<std::future<T>> batch;
    const std::size_t end = std::min(n, begin + threads);
    for (std::size_t i = begin; i < end; ++i) batch.push_back(std::async(std::launch::async, task, i));
    for (std::size_t i = begin; i < end; ++i) slots[i] = batch[i - begin].get();
  }
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

Json report_json(const VerificationReport& r) { return Json::parse(report_to_json(r, -1)); }

struct Output {
  std::string json_path;
  std::string csv_path;

  void attach(CLI::App* app) {
    app->add_option("--json", json_path, "Write the JSON report here (default: stdout)");
    app->add_option("--csv", csv_path, "Write CSV rows here");
  }

  void emit(const Json& doc, const std::string& csv, std::ostream& out) const {
    const std::string text = doc.dump(2) + "\n";
    if (json_path.empty()) {
      out << text;
    } else {
      std::ofstream f(json_path);
      if (!f) throw PreconditionError("cannot write " + json_path);
      f << text;
    }
    if (!csv_path.empty()) {
      std::ofstream f(csv_path);
      if (!f) throw PreconditionError("cannot write " + csv_path);
      f << csv;
    }
  }
};

Json document(const std::string& command) {
  Json doc;
  doc["schema"] = kSchemaVersion;
  doc["command"] = command;
  return doc;
}

std::vector<double> parse_betas(const std::vector<std::string>& texts) {
  std::vector<double> betas;
  for (const auto& t : texts) betas.push_back(parse_beta(t));
  return betas;
}

// ---- ball-eig ------------------------------------------------------------

struct BallEigCommand {
  int n = 2;
  double radius = 0.0;
  std::string beta = "0";
  int steps = 4096;
  Output output;

  void attach(CLI::App* app) {
    app->add_option("--n", n, "Dimension of the sphere")->check(CLI::Range(2, 64));
    app->add_option("--r", radius, "Ball radius in (0, pi/2]")->required();
    app->add_option("--beta", beta, "Robin parameter (number or tan(x))")->allow_extra_args(false);
    app->add_option("--steps", steps, "RK4 steps on [0, R]");
    output.attach(app);
  }

  int run(std::ostream& out) const {
    const RobinBallProblem problem{n, radius, parse_beta(beta), steps};
    const RadialEigenpair pair = first_eigenvalue(problem);
    const EigenfunctionStats stats = u_min_and_l2(pair, problem);
    Json doc = document("ball-eig");
    doc["n"] = n;
    doc["radius"] = radius;
    doc["beta"] = problem.beta;
    doc["lambda"] = pair.lambda;
    doc["boundary_residual"] = shoot(problem, pair.lambda);
    doc["u_min"] = stats.u_min;
    doc["l2sq"] = stats.l2sq;
    std::string csv = "rho,phi\n";
    for (std::size_t k = 0; k < pair.grid.size(); ++k) {
      csv += num(pair.grid[k]) + "," + num(pair.phi[k]) + "\n";
    }
    output.emit(doc, csv, out);
    return kExitPass;
  }
};

// ---- verify-thm1 / verify-thm2 -----------------------------------------

constexpr const char* kVerifyCsvHeader =
    "body_id,beta,perimeter,area,inradius,ball_radius,lambda_D,rq,lambda_h,fem_tol,"
    "min_profile_gap,rq_residual,c_dV,thm2_bound,pass,equality\n";

struct VerifyCommand {
  bool second = false;
  BodySources sources;
  std::vector<std::string> betas{"-0.5", "-1", "-5"};
  int cells = 4096;
  int fem_level = 3;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  Output output;

  void attach(CLI::App* app) {
    sources.attach(app);
    app->add_option("--beta", betas, "Robin parameters (negative)")->delimiter(',');
    app->add_option("--cells", cells, "Profile grid cells")->check(CLI::Range(64, 1 << 20));
    app->add_option("--fem-level", fem_level, "FEM refinement level, -1 to skip")
        ->check(CLI::Range(-1, 6));
    app->add_option("--threads", threads, "Worker threads for the corpus");
    output.attach(app);
  }

  struct Item {
    std::string id;
    double beta;
    VerificationReport report;
  };

  int run(std::ostream& out) const {
    const std::vector<NamedBody> bodies = sources.load();
    const std::vector<double> beta_values = parse_betas(betas);
    for (double b : beta_values) {
      if (!(b < 0.0)) throw PreconditionError("verification requires beta < 0");
    }
    for (const auto& nb : bodies) hemisphere_witness(nb.body);

    const std::size_t total = bodies.size() * beta_values.size();
    auto task = [&](std::size_t index) {
      const NamedBody& nb = bodies[index / beta_values.size()];
      const double beta = beta_values[index % beta_values.size()];
      PipelineOptions options;
      options.transplant.profile_cells = cells;
      if (fem_level >= 0) {
        const FemEstimate fem = fem_estimate(nb.body, beta, fem_level);
        options.fem_lambda = fem.lambda_h;
        options.fem_tol = fem.ball_relative_error;
      }
      VerificationReport report =
          second ? thm2_verify(nb.body, beta, options) : thm1_verify(nb.body, beta, options);
      return Item{nb.id, beta, std::move(report)};
    };
    const std::vector<Item> items = parallel_map<Item>(total, threads, task);

    const std::string command = second ? "verify-thm2" : "verify-thm1";
    Json doc = document(command);
    doc["results"] = Json::array();
    std::string csv = kVerifyCsvHeader;
    bool all_pass = true;
    for (const Item& item : items) {
      const VerificationReport& r = item.report;
      all_pass = all_pass && r.overall();
      Json entry;
      entry["body"] = item.id;
      entry["beta"] = item.beta;
      entry["report"] = report_json(r);
      doc["results"].push_back(entry);
      auto field = [&](const std::string& key) {
        const double v = r.value(key);
        return std::isnan(v) ? std::string() : num(v);
      };
      const double rq_residual = r.value("lambda_ball") - r.value("rq");
      csv += item.id + "," + num(item.beta) + "," + field("perimeter") + "," + field("area") + "," +
             field("inradius") + "," + field("ball_radius") + "," + field("lambda_ball") + "," +
             field("rq") + "," + field("lambda_fem") + "," + field("fem_tol") + "," +
             field("min_profile_gap") + "," + num(rq_residual) + "," +
             field("stability_lower_bound") + "," + field("bound") + "," +
             (r.overall() ? "1" : "0") + "," + (r.equality ? "1" : "0") + "\n";
    }
    doc["overall"] = all_pass;
    output.emit(doc, csv, out);
    return all_pass ? kExitPass : kExitFail;
  }
};

// ---- profile ---------------------------------------------------------------

struct ProfileCommand {
  BodySources sources;
  int cells = 256;
  Output output;

  void attach(CLI::App* app) {
    sources.attach(app);
    app->add_option("--cells", cells, "Profile grid cells (>= 64)");
    output.attach(app);
  }

  int run(std::ostream& out) const {
    const std::vector<NamedBody> bodies = sources.load();
    Json doc = document("profile");
    doc["results"] = Json::array();
    std::string csv = "body_id,t,P,P_ball,slope,bound,residual\n";
    bool all_pass = true;
    for (const auto& nb : bodies) {
      const PerimeterProfile profile = perimeter_profile(nb.body, cells);
      const OdeResiduals r = ode_residuals(profile);
      const VerificationReport report = ode_inequality_check(profile);
      const double radius = radius_from_perimeter(2, profile.ps.front());
      all_pass = all_pass && report.overall();
      for (std::size_t k = 0; k < profile.ts.size(); ++k) {
        const bool cell = k < r.residual.size();
        csv += nb.id + "," + num(profile.ts[k]) + "," + num(profile.ps[k]) + "," +
               num(ball_perimeter(2, radius - profile.ts[k])) + "," +
               (cell ? num(r.slope[k]) : "") + "," + (cell ? num(r.bound[k]) : "") + "," +
               (cell ? num(r.residual[k]) : "") + "\n";
      }
      Json entry;
      entry["body"] = nb.id;
      entry["inradius"] = profile.inradius;
      entry["report"] = report_json(report);
      doc["results"].push_back(entry);
    }
    doc["overall"] = all_pass;
    output.emit(doc, csv, out);
    return all_pass ? kExitPass : kExitFail;
  }
};

// ---- steiner-check -------------------------------------------------------

struct SteinerCommand {
  BodySources sources;
  std::vector<double> distances{0.05, 0.1, 0.2};
  long samples = 1000000;
  std::uint64_t seed = 20240601;
  Output output;

  void attach(CLI::App* app) {
    sources.attach(app);
    app->add_option("--s", distances, "Outer parallel distances in [0, pi/2)")->delimiter(',');
    app->add_option("--samples", samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "Monte Carlo seed");
    output.attach(app);
  }

  int run(std::ostream& out) const {
    const std::vector<NamedBody> bodies = sources.load();
    Json doc = document("steiner-check");
    doc["results"] = Json::array();
    std::string csv = "body_id,s,steiner_volume,mc_volume,mc_stderr,z_score,pass\n";
    bool all_pass = true;
    for (const auto& nb : bodies) {
      const CurvatureMeasures m = compute_measures(nb.body);
      for (double s : distances) {
        const double formula = steiner_volume(m, s);
        const MonteCarloEstimate mc = monte_carlo_outer_volume(nb.body, s, samples, seed);
        const double z = (mc.value - formula) / mc.standard_error;
        const bool pass = std::abs(z) <= 3.0;
        all_pass = all_pass && pass;
        Json entry;
        entry["body"] = nb.id;
        entry["s"] = s;
        entry["steiner_volume"] = formula;
        entry["mc_volume"] = mc.value;
        entry["mc_stderr"] = mc.standard_error;
        entry["pass"] = pass;
        doc["results"].push_back(entry);
        csv += nb.id + "," + num(s) + "," + num(formula) + "," + num(mc.value) + "," +
               num(mc.standard_error) + "," + num(z) + "," + (pass ? "1" : "0") + "\n";
      }
    }
    doc["overall"] = all_pass;
    output.emit(doc, csv, out);
    return all_pass ? kExitPass : kExitFail;
  }
};

// ---- af-check --------------------------------------------------------------

struct AfCommand {
  BodySources sources;
  Output output;

  void attach(CLI::App* app) {
    sources.attach(app);
    output.attach(app);
  }

  int run(std::ostream& out) const {
    const std::vector<NamedBody> bodies = sources.load();
    Json doc = document("af-check");
    doc["results"] = Json::array();
    std::string csv = "body_id,phi0,phi1,phi2,gap,pass\n";
    bool all_pass = true;
    for (const auto& nb : bodies) {
      const CurvatureMeasures m = compute_measures(nb.body);
      const double gap = alexandrov_fenchel_gap(m);
      const bool pass = gap >= -1e-9;
      all_pass = all_pass && pass;
      Json entry;
      entry["body"] = nb.id;
      entry["phi0"] = m.phi0;
      entry["phi1"] = m.phi1;
      entry["phi2"] = m.phi2;
      entry["gap"] = gap;
      entry["pass"] = pass;
      doc["results"].push_back(entry);
      csv += nb.id + "," + num(m.phi0) + "," + num(m.phi1) + "," + num(m.phi2) + "," + num(gap) +
             "," + (pass ? "1" : "0") + "\n";
    }
    doc["overall"] = all_pass;
    output.emit(doc, csv, out);
    return all_pass ? kExitPass : kExitFail;
  }
};

// ---- hyp-witness -----------------------------------------------------------

Json point_json(const hyperbolic::HalfSpacePoint& p) {
  Json j;
  j["xhat"] = p.xhat;
  j["xn"] = p.xn;
  return j;
}

struct HypCommand {
  std::vector<double> deltas{0.05, 0.1, 0.5};
  int n = 2;
  int scan = 20001;
  Output output;

  void attach(CLI::App* app) {
    app->add_option("--delta", deltas, "Inner parallel distances (> 0)")->delimiter(',');
    app->add_option("--n", n, "Half-space dimension (2 or 3)")->check(CLI::Range(2, 3));
    app->add_option("--scan", scan, "Scan points along the geodesic")->check(CLI::Range(3, 10000001));
    output.attach(app);
  }

  int run(std::ostream& out) const {
    Json doc = document("hyp-witness");
    doc["results"] = Json::array();
    std::string csv = "delta,s_star,margin,endpoints_inside,pass\n";
    bool all_pass = true;
    for (double delta : deltas) {
      const auto w = hyperbolic::nonconvexity_witness(delta, n, scan);
      const bool pass = w.margin > 0.0 && w.endpoints_inside;
      all_pass = all_pass && pass;
      Json entry;
      entry["delta"] = delta;
      entry["p"] = point_json(w.p);
      entry["q"] = point_json(w.q);
      entry["s_star"] = w.s_star;
      entry["violating_point"] = point_json(w.violating_point);
      entry["margin"] = w.margin;
      entry["endpoints_inside"] = w.endpoints_inside;
      entry["pass"] = pass;
      doc["results"].push_back(entry);
      csv += num(delta) + "," + num(w.s_star) + "," + num(w.margin) + "," +
             (w.endpoints_inside ? "1" : "0") + "," + (pass ? "1" : "0") + "\n";
    }
    doc["overall"] = all_pass;
    output.emit(doc, csv, out);
    return all_pass ? kExitPass : kExitFail;
  }
};

// ---- mesh ----------------------------------------------------------------

struct MeshCommand {
  BodySources sources;
  int level = 2;
  std::string out_path;

  void attach(CLI::App* app) {
    sources.attach(app);
    app->add_option("--level", level, "Refinement level in [0, 6]");
    app->add_option("--out", out_path, "Mesh file (default: stdout)");
  }

  int run(std::ostream& out) const {
    const std::vector<NamedBody> bodies = sources.load();
    if (bodies.size() != 1) throw PreconditionError("mesh takes exactly one body");
    const GeodesicMesh mesh = mesh_body(bodies.front().body, level);
    if (out_path.empty()) {
      write_mesh(out, mesh);
    } else {
      std::ofstream f(out_path);
      if (!f) throw PreconditionError("cannot write " + out_path);
      write_mesh(f, mesh);
    }
    return kExitPass;
  }
};

bool mentions(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return num(v.get<double>());
  throw PreconditionError("unsupported config value " + v.dump());
}

// Expands a JSON config into command-line tokens for every key not already
// given as a flag.
std::vector<std::string> merge_config(const std::string& path, std::vector<std::string> args,
                                      const std::vector<std::string>& commands) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open config " + path);
  Json config;
  try {
    config = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw PreconditionError("config " + path + " is not valid JSON: " + e.what());
  }
  if (!config.is_object()) throw PreconditionError("config must be a JSON object");
  const bool has_command = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return std::find(commands.begin(), commands.end(), a) != commands.end();
  });
  std::vector<std::string> tokens;
  if (!has_command) {
    if (!config.contains("command")) throw PreconditionError("config lacks a `command` field");
    tokens.push_back(config["command"].get<std::string>());
  }
  std::vector<std::string> extra;
  for (const auto& [key, value] : config.items()) {
    if (key == "command") continue;
    const std::string flag = "--" + key;
    if (mentions(args, flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) extra.push_back(flag);
    } else if (value.is_array()) {
      for (const auto& v : value) extra.push_back(flag + "=" + scalar_text(v));
    } else {
      extra.push_back(flag + "=" + scalar_text(value));
    }
  }
  // Subcommand options must follow the subcommand token.
  if (has_command) {
    tokens = args;
    tokens.insert(tokens.end(), extra.begin(), extra.end());
  } else {
    tokens.insert(tokens.end(), extra.begin(), extra.end());
    tokens.insert(tokens.end(), args.begin(), args.end());
  }
  return tokens;
}

}  // namespace

double parse_beta(const std::string& text) {
  std::string body = text;
  bool tangent = false;
  if (body.rfind("tan(", 0) == 0 && body.size() > 5 && body.back() == ')') {
    body = body.substr(4, body.size() - 5);
    tangent = true;
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(body, &used);
  } catch (const std::exception&) {
    throw PreconditionError("cannot parse Robin parameter `" + text + "`");
  }
  if (used != body.size() || !std::isfinite(value)) {
    throw PreconditionError("cannot parse Robin parameter `" + text + "`");
  }
  return tangent ? std::tan(value) : value;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  const std::vector<std::string> commands{"ball-eig",      "verify-thm1", "verify-thm2", "profile",
                                          "steiner-check", "af-check",    "hyp-witness", "mesh"};
  std::vector<std::string> args;
  std::string config_path;
  for (std::size_t i = 0; i < raw_args.size(); ++i) {
    if (raw_args[i] == "--config" && i + 1 < raw_args.size()) {
      config_path = raw_args[++i];
    } else if (raw_args[i].rfind("--config=", 0) == 0) {
      config_path = raw_args[i].substr(9);
    } else {
      args.push_back(raw_args[i]);
    }
  }

  CLI::App app{"Robin eigenvalue comparison on spherical convex bodies"};
  app.require_subcommand(1);
  BallEigCommand ball_eig;
  VerifyCommand thm1;
  VerifyCommand thm2;
  thm2.second = true;
  ProfileCommand profile;
  SteinerCommand steiner;
  AfCommand af;
  HypCommand hyp;
  MeshCommand mesh;
  ball_eig.attach(app.add_subcommand("ball-eig", "First Robin eigenvalue of a geodesic ball"));
  thm1.attach(app.add_subcommand("verify-thm1", "Ball maximizes lambda_beta at fixed perimeter"));
  thm2.attach(app.add_subcommand("verify-thm2", "Volume-deficit stability bound"));
  profile.attach(app.add_subcommand("profile", "Inner-parallel perimeter profile and ODE check"));
  steiner.attach(app.add_subcommand("steiner-check", "Steiner formula against Monte Carlo"));
  af.attach(app.add_subcommand("af-check", "Alexandrov-Fenchel gap"));
  hyp.attach(app.add_subcommand("hyp-witness", "Non-convex inner parallels in H^n"));
  mesh.attach(app.add_subcommand("mesh", "Dump the FEM mesh of a body"));

  try {
    std::vector<std::string> tokens = config_path.empty() ? args : merge_config(config_path, args, commands);
    std::reverse(tokens.begin(), tokens.end());
    app.parse(tokens);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "ball-eig") return ball_eig.run(out);
    if (name == "verify-thm1") return thm1.run(out);
    if (name == "verify-thm2") return thm2.run(out);
    if (name == "profile") return profile.run(out);
    if (name == "steiner-check") return steiner.run(out);
    if (name == "af-check") return af.run(out);
    if (name == "hyp-witness") return hyp.run(out);
    if (name == "mesh") return mesh.run(out);
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace sphrobin::cli

// infogeo: command-line front end for the simplex geometry library.
//
// Exit codes: 0 success, 1 a check suite failed, 2 usage or domain error,
// 3 numerical failure (blow-up or escape from the simplex).

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "infogeo/checks.hpp"
#include "infogeo/deformed.hpp"
#include "infogeo/flows.hpp"
#include "infogeo/io.hpp"
#include "infogeo/parametric.hpp"
#include "infogeo/zoo.hpp"

namespace {

using namespace infogeo;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kNumerical = 3;

std::vector<double> parse_list(const std::string &text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos)
      end = text.size();
    std::string item = text.substr(pos, end - pos);
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos)
      throw DomainError("empty entry in list \"" + text + "\"");
    item = item.substr(first, last - first + 1);
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size())
      throw DomainError("not a number: \"" + item + "\"");
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

std::string join(std::span<const double> v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? ", " : "") + io::format_double(v[i]);
  return s + "]";
}

/// Output file if a path is given, stdout otherwise.
class Sink {
public:
  explicit Sink(const std::string &path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_)
        throw DomainError("cannot open \"" + path + "\" for writing");
    }
  }
  std::ostream &stream() { return file_ ? *file_ : std::cout; }
  [[nodiscard]] bool is_stdout() const { return !file_; }

private:
  std::unique_ptr<std::ofstream> file_;
};

struct FlowArgs {
  std::string config;
  std::optional<double> dt, t_end;
  std::string out;
  std::uint64_t seed = kDefaultSeed;
};

int cmd_flow(const FlowArgs &a) {
  std::ifstream in(a.config);
  if (!in)
    throw DomainError("cannot read config \"" + a.config + "\"");
  io::FlowConfig cfg = io::parse_flow_config(json::parse(in));
  if (a.dt)
    cfg.dt = *a.dt;
  if (a.t_end)
    cfg.t_end = *a.t_end;
  if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0))
    throw DomainError("dt and t_end must be positive");
  const io::FlowProblem prob = io::make_flow_problem(cfg);
  const Trajectory traj =
      integrate_flow(prob.section, prob.p0, cfg.t_end, cfg.dt, cfg.sign);

  Sink sink(a.out);
  io::write_trajectory_csv(sink.stream(), traj);
  std::ostream &log = sink.is_stdout() ? std::cerr : std::cout;
  log << "seed: " << a.seed << '\n'
      << "steps: " << traj.size() - 1 << ", t_end: " << io::format_double(cfg.t_end)
      << '\n'
      << "terminal point: " << join(traj.points().back().weights()) << '\n'
      << "terminal gradient norm: "
      << io::format_double(norm(traj.scores().back())) << '\n';
  if (prob.loss) {
    const FlowMonitorReport r = monitor_gradient_flow(traj, *prob.loss);
    // sign +1 ascends the loss; compare in the direction of travel
    const double inc = cfg.sign == Sign::minus ? r.max_increase : [&] {
      double m = 0.0;
      for (std::size_t k = 1; k < r.values.size(); ++k)
        m = std::max(m, r.values[k - 1] - r.values[k]);
      return m;
    }();
    log << "monotone: " << (inc <= kMonotoneSlack ? "yes" : "no")
        << " (worst step against the flow " << io::format_double(inc)
        << ", slack " << io::format_double(kMonotoneSlack) << ")\n";
  } else {
    log << "monotone: n/a (transport flow, no objective)\n";
  }
  return kOk;
}

struct CheckArgs {
  std::string suite;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  bool inject_fault = false;
};

int cmd_check(const CheckArgs &a) {
  if (!checks::is_suite(a.suite))
    throw DomainError("unknown suite \"" + a.suite +
                      "\" (transports, flows, second-order, parametric, "
                      "deformed, all)");
  const checks::CheckOptions opt{a.seed, a.inject_fault};
  json report;
  bool passed = true;
  if (a.suite == "all") {
    json suites = json::array();
    for (std::string_view s : checks::kSuites) {
      const checks::SuiteReport r = checks::run_suite(s, opt);
      passed = passed && r.passed();
      suites.push_back(checks::to_json(r));
    }
    report = {{"suite", "all"}, {"seed", a.seed}, {"passed", passed},
              {"suites", std::move(suites)}};
  } else {
    const checks::SuiteReport r = checks::run_suite(a.suite, opt);
    passed = r.passed();
    report = checks::to_json(r);
  }
  Sink sink(a.out);
  sink.stream() << report.dump(2) << '\n';
  return passed ? kOk : kCheckFailed;
}

int cmd_fisher(const std::string &eta_text, const std::string &out) {
  const SolidCoordinates eta(parse_list(eta_text));
  auto rows = [](const linalg::Matrix &m) {
    json r = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < m.cols(); ++j)
        row.push_back(m(i, j));
      r.push_back(std::move(row));
    }
    return r;
  };
  const json j = {
      {"eta", std::vector<double>(eta.values().begin(), eta.values().end())},
      {"fisher", rows(fisher_matrix(eta).matrix())},
      {"fisher_inverse", rows(fisher_inverse(eta).matrix())},
      {"det_fisher_inverse", fisher_inverse_determinant(eta)}};
  Sink sink(out);
  sink.stream() << j.dump(2) << '\n';
  return kOk;
}

struct ZooArgs {
  std::string name;
  std::string p = "0.5,0.5";
  std::string u = "1,-1";
  double t = 0.5;
  std::size_t steps = 50;
  std::string out = "zoo";
};

void write_zoo(const ZooStudy &st, const std::string &prefix) {
  const std::string base = prefix + "_" + std::string(zoo_name(st.curve));
  std::ofstream csv(base + ".csv");
  std::ofstream txt(base + "_verdict.txt");
  if (!csv || !txt)
    throw DomainError("cannot write zoo output with prefix \"" + prefix + "\"");
  const std::size_t n = st.samples.front().weights.size();
  csv << "t";
  for (std::size_t i = 0; i < n; ++i)
    csv << ",w_" << i;
  for (std::size_t i = 0; i < n; ++i)
    csv << ",s_" << i;
  csv << '\n';
  for (const ZooSample &s : st.samples) {
    csv << io::format_double(s.t);
    for (double w : s.weights)
      csv << ',' << io::format_double(w);
    for (double x : s.score)
      csv << ',' << io::format_double(x);
    csv << '\n';
  }
  txt << "curve: " << zoo_name(st.curve) << '\n'
      << "positive: " << (st.positive ? "yes" : "no") << '\n'
      << "membership: " << (st.member ? "PASS" : "FAIL")
      << " (max |sum - 1| = " << io::format_double(st.max_membership_defect)
      << ", tolerance " << io::format_double(kMembershipTolerance) << ")\n";
  if (st.printed_score_residual)
    txt << "printed score residual: "
        << io::format_double(*st.printed_score_residual) << '\n';
  if (st.h_transport_residual)
    txt << "score vs h-transport of U residual: "
        << io::format_double(*st.h_transport_residual) << '\n';
  std::cout << base << ".csv " << base << "_verdict.txt membership "
            << (st.member ? "PASS" : "FAIL") << '\n';
}

int cmd_zoo(const ZooArgs &a) {
  const ProbabilityVector p(parse_list(a.p));
  const FiberVector u = center(parse_list(a.u), p);
  std::vector<ZooCurve> curves;
  if (a.name == "all") {
    curves.assign(std::begin(kZooCurves), std::end(kZooCurves));
  } else if (const auto c = parse_zoo_name(a.name)) {
    curves.push_back(*c);
  } else {
    throw DomainError("unknown curve \"" + a.name + "\" (ex1..ex4, all)");
  }
  for (ZooCurve c : curves)
    write_zoo(study_zoo_curve(c, u, a.t, a.steps), a.out);
  return kOk;
}

struct DeformedArgs {
  std::string kind = "power";
  std::string q = "0,0.5,1,2,3";
  std::string table = "log";
  double x_min = 0.1, x_max = 3.0;
  std::size_t steps = 100;
  std::string out;
};

int cmd_deformed(const DeformedArgs &a) {
  if (a.steps == 0 || !(a.x_min < a.x_max))
    throw DomainError("need steps > 0 and x-min < x-max");
  std::vector<DeformedLog> logs;
  std::vector<double> qs;
  if (a.kind == "power") {
    qs = parse_list(a.q);
    for (double q : qs)
      logs.push_back(DeformedLog::power(q));
  } else if (a.kind == "kaniadakis") {
    logs.push_back(DeformedLog::kaniadakis());
  } else if (a.kind == "newton") {
    logs.push_back(DeformedLog::newton());
  } else {
    throw DomainError("unknown kind \"" + a.kind + "\" (power, kaniadakis, newton)");
  }
  Sink sink(a.out);
  std::ostream &os = sink.stream();
  auto grid = [&](std::size_t k) {
    return a.x_min + (a.x_max - a.x_min) * double(k) / double(a.steps);
  };
  if (a.table == "log") {
    os << "x";
    for (std::size_t j = 0; j < logs.size(); ++j) {
      const std::string label = qs.empty() ? logs[j].name() : "q=" + io::format_double(qs[j]);
      os << ",log[" << label << "],exp[" << label << "]";
    }
    os << '\n';
    for (std::size_t k = 0; k <= a.steps; ++k) {
      const double x = grid(k);
      os << io::format_double(x);
      for (const DeformedLog &dl : logs) {
        // cells outside a function's domain stay empty
        os << ',' << (x > 0.0 ? io::format_double(dl.log(x)) : "");
        const auto [lo, hi] = dl.log_range();
        os << ',' << (x > lo && x < hi ? io::format_double(dl.exp(x)) : "");
      }
      os << '\n';
    }
  } else if (a.table == "entropy") {
    if (a.kind != "power")
      throw DomainError("the entropy table is defined for --kind power");
    if (!(a.x_min > 0.0) || !(a.x_max < 1.0))
      throw DomainError("entropy table: x ranges over (0, 1) for p = (x, 1 - x)");
    os << "x";
    for (double q : qs)
      os << ",H[" << io::format_double(q) << "]";
    os << '\n';
    for (std::size_t k = 0; k <= a.steps; ++k) {
      const double x = grid(k);
      const ProbabilityVector p(std::vector<double>{x, 1.0 - x});
      os << io::format_double(x);
      for (double q : qs)
        os << ',' << io::format_double(tsallis_entropy(p, q));
      os << '\n';
    }
  } else {
    throw DomainError("unknown table \"" + a.table + "\" (log, entropy)");
  }
  return kOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Information geometry of the finite probability simplex"};
  app.require_subcommand(1);

  FlowArgs flow;
  auto *flow_cmd = app.add_subcommand("flow", "Integrate a gradient or transport flow");
  flow_cmd->add_option("--config", flow.config, "Flow configuration JSON")->required();
  flow_cmd->add_option("--dt", flow.dt, "Step size (overrides config)");
  flow_cmd->add_option("--t-end", flow.t_end, "Horizon (overrides config)");
  flow_cmd->add_option("--out", flow.out, "Trajectory CSV path (default stdout)");
  flow_cmd->add_option("--seed", flow.seed, "Seed (flows are deterministic)");

  CheckArgs check;
  auto *check_cmd = app.add_subcommand("check", "Run an invariant suite");
  check_cmd->add_option("suite", check.suite, "transports|flows|second-order|parametric|deformed|all")
      ->required();
  check_cmd->add_option("--seed", check.seed, "Random seed");
  check_cmd->add_option("--out", check.out, "JSON report path (default stdout)");
  check_cmd->add_flag("--inject-fault", check.inject_fault,
                      "Perturb the m-transport to exercise failure reporting");

  std::string eta, fisher_out;
  auto *fisher_cmd = app.add_subcommand("fisher", "Fisher information of the solid simplex");
  fisher_cmd->add_option("eta", eta, "Comma-separated coordinates")->required();
  fisher_cmd->add_option("--out", fisher_out, "JSON path (default stdout)");

  ZooArgs zoo;
  auto *zoo_cmd = app.add_subcommand("zoo", "Study the example curves");
  zoo_cmd->add_option("curve", zoo.name, "ex1|ex2|ex3|ex4|all")->required();
  zoo_cmd->add_option("--p", zoo.p, "Base point, comma-separated");
  zoo_cmd->add_option("--u", zoo.u, "Direction, comma-separated (centered at p)");
  zoo_cmd->add_option("--t", zoo.t, "Sample over [0, t]");
  zoo_cmd->add_option("--steps", zoo.steps, "Number of intervals");
  zoo_cmd->add_option("--out", zoo.out, "Output prefix");

  DeformedArgs def;
  auto *def_cmd = app.add_subcommand("deformed", "Tables of deformed logarithms and entropies");
  def_cmd->add_option("--kind", def.kind, "power|kaniadakis|newton");
  def_cmd->add_option("--q", def.q, "Comma-separated q values (power kind)");
  def_cmd->add_option("--table", def.table, "log|entropy");
  def_cmd->add_option("--x-min", def.x_min, "Grid start");
  def_cmd->add_option("--x-max", def.x_max, "Grid end");
  def_cmd->add_option("--steps", def.steps, "Grid intervals");
  def_cmd->add_option("--out", def.out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*flow_cmd)
      return cmd_flow(flow);
    if (*check_cmd)
      return cmd_check(check);
    if (*fisher_cmd)
      return cmd_fisher(eta, fisher_out);
    if (*zoo_cmd)
      return cmd_zoo(zoo);
    if (*def_cmd)
      return cmd_deformed(def);
  } catch (const NumericalBlowup &e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const DomainEscape &e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception &e) {
    std::cerr << "error: bad JSON: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

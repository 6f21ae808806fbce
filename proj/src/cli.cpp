#include "ceep/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string_view>

#include "ceep/certify.hpp"
#include "ceep/error.hpp"
#include "ceep/flow.hpp"
#include "ceep/graph.hpp"
#include "ceep/io.hpp"
#include "ceep/linalg.hpp"

#ifndef CEEP_DATA_DIR
#define CEEP_DATA_DIR "data"
#endif

namespace ceep::cli {

namespace {

using Json = nlohmann::ordered_json;

// Thrown for bad flag values that CLI11 cannot catch on its own.
struct UsageError : Error {
    using Error::Error;
};

Json to_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json to_json(std::span<const Complex> v) {
    Json a = Json::array();
    for (const auto& z : v) {
        a.push_back(to_json(z));
    }
    return a;
}

Json to_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        rows.push_back(to_json(m.row(i)));
    }
    return rows;
}

template <typename T>
Json optional_json(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

std::string short_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string short_complex(Complex z) {
    return short_real(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + short_real(std::abs(z.imag())) + "i";
}

bool is_complex_object(const Json& j) { return j.is_object() && j.size() == 2 && j.contains("re") && j.contains("im"); }

std::string scalar_text(const Json& j) {
    if (is_complex_object(j)) {
        return short_complex({j["re"].get<double>(), j["im"].get<double>()});
    }
    if (j.is_null()) {
        return "none";
    }
    if (j.is_string()) {
        return j.get<std::string>();
    }
    if (j.is_number_float()) {
        return short_real(j.get<double>());
    }
    return j.dump();
}

// key: value lines, nested objects flattened with dots.
void render_text(const Json& j, const std::string& prefix, std::ostream& out) {
    if (j.is_object() && !is_complex_object(j)) {
        for (const auto& [key, value] : j.items()) {
            render_text(value, prefix.empty() ? key : prefix + "." + key, out);
        }
        return;
    }
    out << prefix << ":";
    if (j.is_array()) {
        const bool nested = !j.empty() && j.front().is_array();
        if (nested) {
            out << "\n";
            for (const auto& row : j) {
                out << " ";
                for (const auto& cell : row) {
                    out << " " << scalar_text(cell);
                }
                out << "\n";
            }
            return;
        }
        if (!j.empty() && j.front().is_string()) {
            out << "\n";
            for (const auto& s : j) {
                out << "  - " << s.get<std::string>() << "\n";
            }
            return;
        }
        for (const auto& v : j) {
            out << " " << scalar_text(v);
        }
        out << "\n";
        return;
    }
    out << " " << scalar_text(j) << "\n";
}

void emit(const Json& report, const std::string& format, std::ostream& out) {
    if (format == "json") {
        out << report.dump(2) << "\n";
    } else {
        render_text(report, "", out);
    }
}

bool starts_with_buses_header(std::string_view text) {
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto line = text.substr(pos, end - pos);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        if (const auto first = line.find_first_not_of(" \t\r"); first != std::string_view::npos) {
            return line.substr(first).starts_with("buses");
        }
        pos = end + 1;
    }
    return false;
}

// Edge lists, or branch lists (recognized by their "buses" header) turned into
// the charging-free admittance graph.
WeightedDigraph load_graph(const std::string& path) {
    const std::string text = read_text_file(path);
    if (starts_with_buses_header(text)) {
        const BranchNetwork net = parse_branch_list(text);
        return graph_from_branches(net.branches, net.bus_count);
    }
    return parse_edge_list(text);
}

Json pf_json(const PFReport& r) {
    return Json{{"holds", r.holds},
                {"dominant_eigenvalue", to_json(r.dominant_eigenvalue)},
                {"dominant_is_positive_real", r.dominant_is_positive_real},
                {"dominant_is_simple", r.dominant_is_simple},
                {"strictly_dominant_modulus", r.strictly_dominant_modulus},
                {"right_vector_real_positive", r.right_vector_real_positive},
                {"dominant_vector", to_json(r.dominant_vector)}};
}

Json certificate_json(const EEPCertificate& c) {
    Json j;
    j["verdict"] = to_string(c.verdict);
    j["shift_rule"] = to_string(c.shift_rule);
    j["shift_d"] = optional_json(c.shift_d);
    j["zero_eigenvalue_simple"] = c.zero_eigenvalue_simple;
    j["nonzero_spectrum_in_open_rhp"] = c.nonzero_spectrum_in_open_rhp;
    j["structure_covered"] = c.structure_covered;
    j["class_p"] = Json{{"evaluated", c.class_p_evaluated},
                        {"member", c.class_p.member},
                        {"right_condition", c.class_p.right_condition},
                        {"left_condition", c.class_p.left_condition},
                        {"pf_of_M", pf_json(c.class_p.pf_of_M)},
                        {"pf_of_M_conjugate_transpose", pf_json(c.class_p.pf_of_M_conjugate_transpose)}};
    j["power_onset_k0"] = optional_json(c.power_onset_k0);
    j["exponential_onset_t0"] = optional_json(c.exponential_onset_t0);
    j["symmetric_part_psd"] = c.symmetric_part_psd;
    j["laplacian_normal"] = c.laplacian_normal;
    j["sampled_disagreement"] = c.sampled_disagreement;
    j["laplacian_eigenvalues"] = to_json(c.laplacian_eigenvalues);
    j["evidence_notes"] = c.evidence_notes;
    return j;
}

int cmd_analyze(const std::string& path, const std::string& format, std::ostream& out) {
    const WeightedDigraph g = load_graph(path);
    const LaplacianBundle b = build_laplacian(g);
    Json j;
    j["vertices"] = g.order();
    j["edges"] = g.edges().size();
    j["undirected"] = b.flags.undirected;
    j["weight_balanced"] = b.flags.weight_balanced;
    j["unsigned"] = b.flags.unsigned_weights;
    j["strongly_connected"] = b.flags.strongly_connected;
    j["weakly_connected"] = b.flags.weakly_connected;
    j["irreducible"] = g.order() >= 2 ? Json(is_irreducible(b.laplacian)) : Json(nullptr);
    j["eigenvalues"] = to_json(eigenvalues(b.laplacian));
    j["symmetric_part_psd"] = symmetric_part_psd(b.laplacian);
    j["laplacian_normal"] = is_normal(b.laplacian);
    j["laplacian"] = to_json(b.laplacian);
    emit(j, format, out);
    return kSuccess;
}

int cmd_certify(const std::string& path, const std::string& rule_text, const std::string& format, std::ostream& out) {
    ShiftRule rule;
    try {
        rule = parse_shift_rule(rule_text);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    const LaplacianBundle b = build_laplacian(load_graph(path));
    const EEPCertificate c = certify_laplacian(b, rule);
    emit(certificate_json(c), format, out);
    return c.verdict == Verdict::RealEEP ? kSuccess : kVerdictNegative;
}

struct SimulateOptions {
    std::string path;
    std::string x0;
    double horizon = 20.0;
    double dt = 0.01;
    std::string method = "exact";
    std::string out_path;
};

int cmd_simulate(const SimulateOptions& o, const std::string& format, std::ostream& out) {
    const LaplacianBundle b = build_laplacian(load_graph(o.path));
    const ComplexVector x0 = parse_complex_list(o.x0);
    if (x0.size() != b.laplacian.rows()) {
        throw DimensionError("--x0 has " + std::to_string(x0.size()) + " entries, graph has " +
                             std::to_string(b.laplacian.rows()) + " vertices");
    }
    if (!(o.dt > 0.0) || !(o.horizon >= 0.0) || !std::isfinite(o.horizon)) {
        throw UsageError("need --dt > 0 and a finite --horizon >= 0");
    }
    if (o.method == "rk4" && o.horizon > 0.0 && o.dt > o.horizon) {
        throw UsageError("--dt must not exceed --horizon");
    }

    FlowResult r;
    if (o.method == "exact") {
        const auto times = uniform_time_grid(o.dt, o.horizon);
        r = simulate_exact(b.laplacian, x0, times);
    } else {
        r = simulate_rk4(b.laplacian, x0, o.dt, o.horizon);
    }
    if (!o.out_path.empty()) {
        std::ofstream file(o.out_path, std::ios::binary);
        if (!file) {
            throw ParseError(0, "cannot write '" + o.out_path + "'");
        }
        file << write_trajectory_csv(r);
    }

    Json j;
    j["method"] = o.method;
    j["samples"] = r.times.size();
    j["horizon"] = r.times.back();
    j["consensus_reached"] = r.consensus_reached;
    j["consensus_time"] = optional_json(r.consensus_time);
    j["final_disagreement"] = r.disagreement.back();
    j["final_state"] = to_json(r.states.back());
    j["predicted_limit"] = r.predicted_limit ? to_json(*r.predicted_limit) : Json(nullptr);
    j["trajectory_csv"] = o.out_path.empty() ? Json(nullptr) : Json(o.out_path);
    emit(j, format, out);
    return r.consensus_reached ? kSuccess : kVerdictNegative;
}

// ---- reproduce ----------------------------------------------------------

struct Check {
    std::string name;
    bool passed;
    std::string detail;
};

class Checklist {
public:
    void expect(std::string name, bool ok, std::string detail = {}) {
        checks_.push_back({std::move(name), ok, std::move(detail)});
    }

    void near(std::string name, double expected, double actual, double tol) {
        const double diff = std::abs(expected - actual);
        expect(std::move(name), diff <= tol,
               "expected " + short_real(expected) + " got " + short_real(actual) + " diff " + short_real(diff) +
                   " tol " + short_real(tol));
    }

    void near(std::string name, Complex expected, Complex actual, double tol) {
        const double diff = std::abs(expected - actual);
        expect(std::move(name), diff <= tol,
               "expected " + short_complex(expected) + " got " + short_complex(actual) + " diff " +
                   short_real(diff) + " tol " + short_real(tol));
    }

    const std::vector<Check>& checks() const { return checks_; }

    bool all_passed() const {
        return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.passed; });
    }

private:
    std::vector<Check> checks_;
};

const ComplexVector kX0{{6.0, 2.0}, {2.0, -1.0}, {4.0, 0.7}};

// Printed values, three significant figures.
const ComplexVector kSpectrumL1{{0.0, 0.0}, {4.26, 2.24}, {7.7, 2.7}};
const ComplexMatrix kExpL1{{{0.33, 0.01}, {0.33, 0.002}, {0.34, 0.005}},
                           {{0.33, 0.002}, {0.33, -0.006}, {0.33, 0.001}},
                           {{0.34, 0.005}, {0.33, -0.001}, {0.33, -0.003}}};
const ComplexVector kSpectrumL2{{0.0, 0.0}, {1.06, 1.61}, {1.93, -0.11}};
const ComplexMatrix kExpL2{{{0.38, 0.11}, {0.21, 0.1}, {0.42, 0.01}},
                           {{0.42, 0.01}, {0.38, -0.11}, {0.21, 0.1}},
                           {{0.21, 0.1}, {0.42, 0.01}, {0.38, -0.11}}};

void check_spectrum(Checklist& list, const std::string& tag, const ComplexMatrix& l, const ComplexVector& expected) {
    ComplexVector computed = eigenvalues(l);
    std::vector<bool> used(computed.size(), false);
    for (std::size_t k = 0; k < expected.size(); ++k) {
        std::size_t best = computed.size();
        for (std::size_t i = 0; i < computed.size(); ++i) {
            if (!used[i] && (best == computed.size() ||
                             std::abs(computed[i] - expected[k]) < std::abs(computed[best] - expected[k]))) {
                best = i;
            }
        }
        if (best == computed.size()) {
            list.expect(tag + ".spectrum[" + std::to_string(k) + "]", false, "no eigenvalue left to match");
            continue;
        }
        used[best] = true;
        list.near(tag + ".spectrum[" + std::to_string(k) + "]", expected[k], computed[best], 0.05);
    }
}

void check_exponential(Checklist& list, const std::string& tag, const ComplexMatrix& l, const ComplexMatrix& expected) {
    const ComplexMatrix e = expm(-l);
    for (std::size_t i = 0; i < e.rows(); ++i) {
        for (std::size_t j = 0; j < e.cols(); ++j) {
            const std::string cell = tag + ".exp(-L)(" + std::to_string(i) + "," + std::to_string(j) + ")";
            list.near(cell + ".re", expected(i, j).real(), e(i, j).real(), 0.01);
            list.near(cell + ".im", expected(i, j).imag(), e(i, j).imag(), 0.01);
        }
    }
}

void check_verdict(Checklist& list, const std::string& tag, const EEPCertificate& c, Verdict expected) {
    list.expect(tag + ".verdict", c.verdict == expected,
                std::string("expected ") + to_string(expected) + " got " + to_string(c.verdict));
    list.expect(tag + ".no_sampled_disagreement", !c.sampled_disagreement);
}

void reproduce_ex1(Checklist& list, const std::string& dir) {
    const LaplacianBundle b = build_laplacian(load_graph(dir + "/ex1.edges"));
    check_spectrum(list, "ex1", b.laplacian, kSpectrumL1);
    check_exponential(list, "ex1", b.laplacian, kExpL1);
    const EEPCertificate c = certify_laplacian(b);
    check_verdict(list, "ex1", c, Verdict::RealEEP);
    list.expect("ex1.symmetric_part_psd", c.symmetric_part_psd);
    list.expect("ex1.complex_symmetric", b.laplacian == b.laplacian.transpose());
}

void reproduce_ex2(Checklist& list, const std::string& dir) {
    const LaplacianBundle b = build_laplacian(load_graph(dir + "/ex2.edges"));
    check_spectrum(list, "ex2", b.laplacian, kSpectrumL2);
    check_exponential(list, "ex2", b.laplacian, kExpL2);
    const EEPCertificate c = certify_laplacian(b);
    check_verdict(list, "ex2", c, Verdict::RealEEP);
    list.expect("ex2.symmetric_part_psd", c.symmetric_part_psd);
    list.expect("ex2.strongly_connected", b.flags.strongly_connected);
    list.expect("ex2.weight_balanced", b.flags.weight_balanced);
    list.expect("ex2.normal", c.laplacian_normal);

    const auto times = uniform_time_grid(0.05, 20.0);
    const FlowResult r = simulate_exact(b.laplacian, kX0, times);
    Complex mean{};
    for (const auto& x : kX0) {
        mean += x / static_cast<double>(kX0.size());
    }
    list.expect("ex2.consensus_reached", r.consensus_reached,
                "final disagreement " + short_real(r.disagreement.back()));
    for (std::size_t i = 0; i < kX0.size(); ++i) {
        list.near("ex2.limit[" + std::to_string(i) + "]", mean, r.states.back()[i], 1e-4);
    }
}

void reproduce_counter(Checklist& list, const std::string& dir) {
    const LaplacianBundle b = build_laplacian(load_graph(dir + "/counter.edges"));
    const EEPCertificate c = certify_laplacian(b);
    check_verdict(list, "counter", c, Verdict::NotRealEEP);
    list.expect("counter.weakly_connected", b.flags.weakly_connected);
    list.expect("counter.not_strongly_connected", !b.flags.strongly_connected);

    const auto times = uniform_time_grid(0.05, 20.0);
    const FlowResult r = simulate_exact(b.laplacian, kX0, times);
    const double closest = *std::min_element(r.disagreement.begin(), r.disagreement.end());
    list.expect("counter.no_consensus", !r.consensus_reached && closest >= 0.5,
                "min disagreement " + short_real(closest));
}

void reproduce_power(Checklist& list, const std::string& dir) {
    const BranchNetwork net = parse_branch_list(read_text_file(dir + "/power12.branches"));
    const ComplexMatrix y = ybus_from_branches(net.branches, net.bus_count);
    list.expect("power.ybus_complex_symmetric", y == y.transpose());
    const double skew = (y - y.adjoint()).frobenius_norm();
    list.expect("power.ybus_not_hermitian", skew > 0.0, "||Y - Y^H||_F = " + short_real(skew));

    const ComplexMatrix y_free = ybus_from_branches(net.branches, net.bus_count, ShuntModel::omit_charging);
    const LaplacianBundle b = build_laplacian(graph_from_branches(net.branches, net.bus_count));
    list.expect("power.laplacian_is_charging_free_ybus", (b.laplacian - y_free).max_abs() <= 1e-12);
    const EEPCertificate c = certify_laplacian(b);
    check_verdict(list, "power", c, Verdict::RealEEP);

    ComplexVector x0(net.bus_count);
    for (std::size_t i = 0; i < x0.size(); ++i) {
        x0[i] = {1.0 + static_cast<double>(i % 5), 0.25 * static_cast<double>(i % 3) - 0.5};
    }
    const auto times = default_time_grid(b.laplacian);
    const FlowResult r = simulate_exact(b.laplacian, x0, times);
    list.expect("power.consensus_reached", r.consensus_reached,
                "final disagreement " + short_real(r.disagreement.back()));
    if (r.predicted_limit) {
        double worst = 0.0;
        for (std::size_t i = 0; i < x0.size(); ++i) {
            worst = std::max(worst, std::abs(r.states.back()[i] - (*r.predicted_limit)[i]));
        }
        list.expect("power.limit_matches_projector", worst <= 1e-4, "max deviation " + short_real(worst));
    } else {
        list.expect("power.limit_matches_projector", false, "no predicted limit");
    }
}

int cmd_reproduce(const std::string& id, const std::string& data_dir, const std::string& format, std::ostream& out) {
    Checklist list;
    if (id == "ex1") {
        reproduce_ex1(list, data_dir);
    } else if (id == "ex2") {
        reproduce_ex2(list, data_dir);
    } else if (id == "counter") {
        reproduce_counter(list, data_dir);
    } else if (id == "power") {
        reproduce_power(list, data_dir);
    } else {
        throw UsageError("unknown example '" + id + "' (expected ex1, ex2, counter or power)");
    }

    std::size_t failed = 0;
    for (const auto& c : list.checks()) {
        failed += c.passed ? 0 : 1;
    }
    if (format == "json") {
        Json j;
        j["example"] = id;
        j["passed"] = list.all_passed();
        j["failures"] = failed;
        Json checks = Json::array();
        for (const auto& c : list.checks()) {
            checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        }
        j["checks"] = checks;
        out << j.dump(2) << "\n";
    } else {
        for (const auto& c : list.checks()) {
            out << (c.passed ? "PASS " : "FAIL ") << c.name;
            if (!c.detail.empty()) {
                out << "  " << c.detail;
            }
            out << "\n";
        }
        out << id << ": " << (list.checks().size() - failed) << "/" << list.checks().size() << " passed\n";
        if (failed > 0) {
            out << "mismatches:\n";
            for (const auto& c : list.checks()) {
                if (!c.passed) {
                    out << "  " << c.name << "\n";
                }
            }
        }
    }
    return failed == 0 ? kSuccess : kVerdictNegative;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Certify real eventual exponential positivity of complex Laplacians and simulate their flow",
                 "ceep"};
    app.require_subcommand(1);
    std::string format = "text";
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

    std::string graph_path;
    auto* analyze = app.add_subcommand("analyze", "Graph flags, Laplacian spectrum, symmetric-part PSD");
    analyze->add_option("graph", graph_path, "Edge list or branch list")->required();

    std::string shift_rule = "corrected_dominance";
    auto* certify = app.add_subcommand("certify", "Real EEP certificate; exit 1 unless RealEEP");
    certify->add_option("graph", graph_path, "Edge list or branch list")->required();
    certify->add_option("--shift-rule", shift_rule, "paper_eq5 or corrected_dominance")->capture_default_str();

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Integrate x' = -L x; exit 1 if consensus is not reached");
    simulate->add_option("graph", sim.path, "Edge list or branch list")->required();
    simulate->add_option("--x0", sim.x0, "Initial state, comma-separated complex literals")->required();
    simulate->add_option("--horizon", sim.horizon, "Final time")->capture_default_str();
    simulate->add_option("--dt", sim.dt, "Output spacing (exact) or step size (rk4)")->capture_default_str();
    simulate->add_option("--method", sim.method, "exact or rk4")
        ->check(CLI::IsMember({"exact", "rk4"}))
        ->capture_default_str();
    simulate->add_option("--out", sim.out_path, "Trajectory CSV path");

    std::string example;
    std::string data_dir = CEEP_DATA_DIR;
    auto* reproduce = app.add_subcommand("reproduce", "Run a bundled example and compare against stored values");
    reproduce->add_option("example", example, "ex1, ex2, counter or power")->required();
    reproduce->add_option("--data-dir", data_dir, "Fixture directory")->capture_default_str();

    for (auto* sub : {analyze, certify, simulate, reproduce}) {
        sub->fallthrough();
    }

    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.push_back("ceep");
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) {
        argv.push_back(a.data());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsageError;
    }

    try {
        if (*analyze) {
            return cmd_analyze(graph_path, format, out);
        }
        if (*certify) {
            return cmd_certify(graph_path, shift_rule, format, out);
        }
        if (*simulate) {
            return cmd_simulate(sim, format, out);
        }
        return cmd_reproduce(example, data_dir, format, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kUsageError;
    } catch (const ValidationError& e) {
        err << "invalid graph: " << e.what() << "\n";
        return kUsageError;
    } catch (const DimensionError& e) {
        err << "dimension error: " << e.what() << "\n";
        return kUsageError;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    }
}

}  // namespace ceep::cli

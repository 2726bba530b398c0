// fopq command line: parse a problem file (moments or a matrix triplet),
// run the requested analysis, and emit a deterministic JSON report.
//
// Exit codes: 0 ok, 2 parse error, 3 horizon exceeded, 4 not a regular
// degree, 5 zero initial coupling, 6 no realizable degree.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "fopq/exact.hpp"
#include "fopq/fop.hpp"
#include "fopq/functional.hpp"
#include "fopq/hankel.hpp"
#include "fopq/lanczos.hpp"
#include "fopq/quadrature.hpp"
#include "fopq/realization.hpp"
#include "fopq/types.hpp"

using json = nlohmann::ordered_json;
using namespace fopq;

namespace {

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Deterministic serialization: fixed key order (insertion order) and floats
// rendered with 17 significant digits.

void format_number(double v, std::string& out) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

void write_json(const json& j, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in + json(it.key()).dump() + ": ";
                write_json(it.value(), out, indent + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Scalar-only arrays stay on one line (complex pairs, residuals).
            bool scalars = true;
            for (const auto& e : j) scalars = scalars && !e.is_structured();
            if (scalars) {
                out += "[";
                bool first = true;
                for (const auto& e : j) {
                    if (!first) out += ", ";
                    first = false;
                    write_json(e, out, indent);
                }
                out += "]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& e : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                write_json(e, out, indent + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case json::value_t::number_float:
            format_number(j.get<double>(), out);
            return;
        default:
            out += j.dump();
            return;
    }
}

std::string render(const json& j) {
    std::string out;
    write_json(j, out, 0);
    out += "\n";
    return out;
}

json cplx(Complex z) { return json::array({z.real(), z.imag()}); }

json vec_json(const Eigen::VectorXcd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(cplx(v(i)));
    return a;
}

json mat_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(cplx(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

std::string fnv1a_digest(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// Problem file

struct Problem {
    std::optional<MomentSequence> moments;
    std::optional<RealizationTriplet> triplet;
    TolerancePolicy tol;
    std::string digest;

    Functional functional() const {
        if (moments) return Functional::from_moments(*moments);
        return Functional::from_triplet(triplet->w, triplet->A, triplet->v);
    }
};

Complex parse_complex(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError("complex numbers must be two-element arrays [re, im]");
    Complex z(j[0].get<double>(), j[1].get<double>());
    if (!is_finite(z)) throw ParseError("complex values must be finite");
    return z;
}

Eigen::VectorXcd parse_vector(const nlohmann::json& j, const char* name) {
    if (!j.is_array() || j.empty()) throw ParseError(std::string(name) + " must be a non-empty array");
    Eigen::VectorXcd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_complex(j[i]);
    return v;
}

Problem parse_problem(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("problem file must be a JSON object");

    Problem p;
    p.digest = fnv1a_digest(text);
    const bool has_moments = j.contains("moments");
    const bool has_triplet = j.contains("A") || j.contains("v") || j.contains("w");
    if (has_moments == has_triplet)
        throw ParseError("exactly one of \"moments\" or \"A\",\"v\",\"w\" must be present");

    if (has_moments) {
        const auto& m = j["moments"];
        if (!m.is_array() || m.empty()) throw ParseError("\"moments\" must be a non-empty array");
        std::vector<Complex> values;
        for (const auto& e : m) values.push_back(parse_complex(e));
        p.moments = MomentSequence(std::move(values));
    } else {
        if (!(j.contains("A") && j.contains("v") && j.contains("w")))
            throw ParseError("triplet input needs all of \"A\", \"v\", \"w\"");
        const auto& a = j["A"];
        if (!a.is_array() || a.empty()) throw ParseError("\"A\" must be a non-empty array of rows");
        const std::size_t n = a.size();
        Eigen::MatrixXcd mat(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            if (!a[i].is_array() || a[i].size() != n) throw ParseError("\"A\" must be square");
            for (std::size_t c = 0; c < n; ++c)
                mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = parse_complex(a[i][c]);
        }
        RealizationTriplet t;
        t.A = std::move(mat);
        t.v = parse_vector(j["v"], "v");
        t.w = parse_vector(j["w"], "w");
        if (t.v.size() != t.A.rows() || t.w.size() != t.A.rows())
            throw ParseError("vector lengths must match the matrix dimension");
        p.triplet = std::move(t);
    }

    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (!t.is_object()) throw ParseError("\"tolerances\" must be an object");
        if (t.contains("zero_det_tol")) p.tol.zero_det_tol = t["zero_det_tol"].get<double>();
        if (t.contains("cluster_tol")) p.tol.cluster_tol = t["cluster_tol"].get<double>();
        if (t.contains("residual_tol")) p.tol.residual_tol = t["residual_tol"].get<double>();
    }
    return p;
}

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open input file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json tolerance_record(const TolerancePolicy& tol) {
    json t;
    t["zero_det_tol"] = tol.zero_det_tol;
    t["cluster_tol"] = tol.cluster_tol;
    t["residual_tol"] = tol.residual_tol;
    return t;
}

json report_head(const std::string& command, const json& flags, const Problem& p) {
    json r;
    r["command"] = command;
    r["flags"] = flags;
    r["input_digest"] = p.digest;
    r["tolerances"] = tolerance_record(p.tol);
    return r;
}

void emit(const json& report, const std::string& output) {
    std::string text = render(report);
    if (output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(output, std::ios::binary);
    out << text;
}

json breakdown_json(const BreakdownReport& b) {
    json r;
    r["kind"] = to_string(b.kind);
    r["step"] = b.step;
    r["detail"] = b.detail;
    return r;
}

json rule_json(const QuadratureRule& rule) {
    json nodes = json::array();
    for (const auto& qn : rule.nodes) {
        json n;
        n["node"] = cplx(qn.node);
        n["multiplicity"] = qn.multiplicity;
        json ws = json::array();
        for (Complex w : qn.weights) ws.push_back(cplx(w));
        n["weights"] = ws;
        n["trailing_weight_suspect"] = qn.trailing_weight_suspect;
        nodes.push_back(n);
    }
    json r;
    r["n"] = rule.n;
    r["nodes"] = nodes;
    r["prefactor"] = cplx(rule.prefactor);
    r["nu1"] = rule.nu1;
    r["degree_of_exactness"] = rule.exactness.degree;
    r["exact_through_range"] = rule.exactness.whole_range;
    return r;
}

// ---------------------------------------------------------------------------
// Commands

struct CommonArgs {
    std::string input;
    std::string output;
    std::optional<double> tol_zero, tol_cluster, tol_residual;

    Problem load() const {
        Problem p = parse_problem(read_input(input));
        if (tol_zero) p.tol.zero_det_tol = *tol_zero;
        if (tol_cluster) p.tol.cluster_tol = *tol_cluster;
        if (tol_residual) p.tol.residual_tol = *tol_residual;
        p.tol.validate();
        return p;
    }
};

json classification_table(const HankelAnalysis& analysis, std::size_t n_max) {
    json table = json::array();
    for (std::size_t n = 1; n <= n_max; ++n) {
        json row;
        row["degree"] = n;
        try {
            DegreeClassification c = classify_degrees(analysis, n);
            row["kind"] = to_string(c.at(n));
        } catch (const InsufficientPattern& e) {
            row["kind"] = "Undecidable";
            row["needs_delta_index"] = e.needed_index;
        }
        table.push_back(row);
    }
    return table;
}

int cmd_analyze(const CommonArgs& common, const std::string& pattern, bool exact_mode,
                std::optional<std::size_t> max_degree) {
    Problem p;
    HankelAnalysis analysis;
    json flags;
    flags["pattern"] = pattern;
    flags["exact"] = exact_mode;
    flags["max_degree"] = max_degree ? json(*max_degree) : json(nullptr);

    if (!pattern.empty()) {
        p.digest = fnv1a_digest(pattern);
        if (common.tol_zero) p.tol.zero_det_tol = *common.tol_zero;
        if (common.tol_cluster) p.tol.cluster_tol = *common.tol_cluster;
        if (common.tol_residual) p.tol.residual_tol = *common.tol_residual;
        p.tol.validate();
        analysis = HankelAnalysis::from_pattern(pattern, p.tol);
    } else {
        p = common.load();
        analysis = analyze(p.functional(), p.tol);
    }

    json report = report_head("analyze", flags, p);
    json payload;
    payload["synthetic_pattern"] = !pattern.empty();
    payload["pattern"] = analysis.pattern();
    json deltas = json::array();
    for (Complex d : analysis.deltas) deltas.push_back(cplx(d));
    payload["deltas"] = deltas;
    payload["regular_indices"] = analysis.regular_indices;
    payload["kronecker"] = analysis.kronecker;
    payload["euclidean"] = analysis.euclidean;
    payload["incurable_from"] =
        analysis.incurable_from ? json(*analysis.incurable_from) : json(nullptr);
    payload["incurable_certain"] = analysis.incurable_certain;
    std::size_t table_max = max_degree ? *max_degree : analysis.max_index() + 1;
    payload["classification"] = classification_table(analysis, table_max);

    if (exact_mode) {
        if (!p.moments) throw ParseError("--exact requires moment input");
        std::size_t count = p.moments->horizon() / 2 + 1;
        HankelAnalysis ex = determinant_sequence_exact(p.moments->moments, count, p.tol);
        json exact;
        exact["pattern"] = ex.pattern();
        json ds = json::array();
        exact::ExactHankelPattern raw = exact::hankel_pattern(p.moments->moments, count);
        for (const auto& d : raw.deltas) ds.push_back(d.str());
        exact["deltas"] = ds;
        exact["agrees_with_float"] = ex.is_zero == analysis.is_zero;
        payload["exact"] = exact;
    }
    report["analysis"] = payload;
    emit(report, common.output);
    return 0;
}

int cmd_quadrature(const CommonArgs& common, std::size_t n) {
    Problem p = common.load();
    Functional functional = p.functional();
    HankelAnalysis analysis = analyze(functional, p.tol);
    FopSequence seq = build_fop_sequence(functional, n, analysis);
    QuadratureRule rule = gauss_quadrature(functional, n, seq, p.tol);

    json flags;
    flags["n"] = n;
    json report = report_head("quadrature", flags, p);
    json payload = rule_json(rule);
    payload["T"] = mat_json(rule.source_T.matrix);

    if (rule.nu1 > 0) {
        std::size_t k_max;
        auto range = matching_range(analysis, n);
        if (functional.horizon())
            k_max = std::min(range.value_or(*functional.horizon()), *functional.horizon());
        else
            k_max = range.value_or(2 * (n + functional.dimension()));
        MomentMatchReport match = matching_moment_check(rule.source_T, functional, k_max);
        json m;
        m["k_max"] = k_max;
        m["residuals"] = match.residuals;
        m["max_absolute"] = match.max_absolute;
        m["max_relative"] = match.max_relative;
        payload["matching_moments"] = m;
    }
    report["quadrature"] = payload;
    emit(report, common.output);
    return 0;
}

int cmd_lanczos(const CommonArgs& common, std::optional<std::size_t> n_max, bool look_ahead) {
    Problem p = common.load();
    if (!p.triplet) throw ParseError("lanczos requires triplet input");
    const auto& t = *p.triplet;
    const std::size_t dim = t.dimension();
    std::size_t steps = n_max.value_or(look_ahead ? 2 * dim : dim);

    auto [state, stop] = look_ahead
                             ? look_ahead_lanczos(t.A, t.v, t.w, steps, p.tol)
                             : lanczos(t.A, t.v, t.w, steps, p.tol);
    Functional functional = p.functional();
    HankelAnalysis analysis = analyze(functional, p.tol);
    BreakdownReport classified = classify_breakdown(state, analysis);

    json flags;
    flags["n_max"] = steps;
    flags["look_ahead"] = look_ahead;
    json report = report_head("lanczos", flags, p);
    json payload;
    payload["T"] = mat_json(state.T.matrix);
    payload["blocks"] = state.T.nu;
    payload["steps"] = state.step;
    payload["truncated"] = state.truncated;
    payload["stop"] = breakdown_json(stop);
    payload["breakdown"] = breakdown_json(classified);
    payload["biorthogonality_residual"] = state.biorthogonality_residual(look_ahead);
    payload["krylov_residual"] = state.krylov_residual(t.A);
    report["lanczos"] = payload;
    emit(report, common.output);
    return 0;
}

int cmd_realize(const CommonArgs& common, std::size_t k) {
    Problem p = common.load();
    if (!p.moments) throw ParseError("realize requires moment input");
    MinimalRealization real = minimal_partial_realization(*p.moments, k, p.tol);
    MomentSequence markov = markov_parameters(real.triplet, k);
    double resid = 0.0;
    double scale = 1.0;
    for (std::size_t j = 0; j <= k; ++j) {
        resid = std::max(resid, std::abs(markov[j] - (*p.moments)[j]));
        scale = std::max(scale, std::abs((*p.moments)[j]));
    }

    json flags;
    flags["k"] = k;
    json report = report_head("realize", flags, p);
    json payload;
    payload["dimension"] = real.n;
    payload["w"] = vec_json(real.triplet.w);
    payload["A"] = mat_json(real.triplet.A);
    payload["v"] = vec_json(real.triplet.v);
    payload["markov_residual"] = resid / scale;
    payload["certificate"] = real.certificate;
    report["realization"] = payload;
    emit(report, common.output);
    return 0;
}

int cmd_verify(const CommonArgs& common) {
    Problem p = common.load();
    if (!p.triplet) throw ParseError("verify requires triplet input");
    const auto& t = *p.triplet;
    MismatchReport mismatch = mismatch_check(t.A, t.v, t.w, p.tol);

    json report = report_head("verify", json::object(), p);
    json payload;
    payload["breakdown"] = breakdown_json(mismatch.breakdown);
    json ritz = json::array();
    for (Complex r : mismatch.ritz) ritz.push_back(cplx(r));
    json spectrum = json::array();
    for (Complex s : mismatch.spectrum) spectrum.push_back(cplx(s));
    payload["ritz"] = ritz;
    payload["spectrum"] = spectrum;
    payload["max_min_distance"] = mismatch.max_min_distance;
    payload["applicable"] = mismatch.applicable;

    // Matching moment residuals for the last closed block of the run.
    Functional functional = p.functional();
    HankelAnalysis analysis = analyze(functional, p.tol);
    auto [state, stop] = look_ahead_lanczos(t.A, t.v, t.w, 2 * t.dimension(), p.tol);
    json match;
    if (state.T.nu.size() > 1) {
        std::size_t closed = state.T.nu.back();
        BlockTridiagonal tn = state.T.leading(closed);
        auto range = matching_range(analysis, closed);
        std::size_t k_max = range.value_or(2 * (closed + t.dimension()));
        MomentMatchReport m = matching_moment_check(tn, functional, k_max);
        match["k_max"] = k_max;
        match["residuals"] = m.residuals;
        match["max_absolute"] = m.max_absolute;
        match["max_relative"] = m.max_relative;
    } else {
        match["note"] = "no closed leading block; matching moment form not applicable";
    }
    payload["moment_match"] = match;
    report["verify"] = payload;
    emit(report, common.output);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gauss quadrature for linear functionals: Hankel analysis, formal orthogonal "
                 "polynomials, look-ahead Lanczos, and minimal partial realizations"};
    app.require_subcommand(1);

    CommonArgs common;
    std::string pattern;
    bool exact_mode = false;
    bool look_ahead = false;
    std::optional<std::size_t> max_degree, n_max;
    std::size_t quad_n = 0, realize_k = 0;

    auto add_common = [&](CLI::App* cmd, bool input_required) {
        auto* opt = cmd->add_option("input", common.input, "problem file (JSON), '-' for stdin");
        if (input_required) opt->required();
        cmd->add_option("-o,--output", common.output, "write the report to a file instead of stdout");
        cmd->add_option("--tol-zero", common.tol_zero, "zero determinant tolerance");
        cmd->add_option("--tol-cluster", common.tol_cluster, "eigenvalue cluster tolerance");
        cmd->add_option("--tol-residual", common.tol_residual, "verification residual tolerance");
    };

    auto* analyze_cmd = app.add_subcommand("analyze", "Hankel determinant pattern and degree classification");
    add_common(analyze_cmd, false);
    analyze_cmd->add_option("--pattern", pattern, "synthetic zero-nonzero pattern, e.g. xx0x (overrides input)");
    analyze_cmd->add_flag("--exact", exact_mode, "also compute the exact rational pattern");
    analyze_cmd->add_option("--max-degree", max_degree, "largest degree in the classification table");

    auto* quad_cmd = app.add_subcommand("quadrature", "Gauss quadrature rule at a regular degree");
    add_common(quad_cmd, true);
    quad_cmd->add_option("--n", quad_n, "number of nodes (counting multiplicities)")->required();

    auto* lanczos_cmd = app.add_subcommand("lanczos", "biorthogonalization run on a triplet");
    add_common(lanczos_cmd, true);
    lanczos_cmd->add_option("--n-max", n_max, "step limit");
    lanczos_cmd->add_flag("--look-ahead", look_ahead, "use the look-ahead recurrence");

    auto* realize_cmd = app.add_subcommand("realize", "minimal partial realization of a moment sequence");
    add_common(realize_cmd, true);
    realize_cmd->add_option("--k", realize_k, "match moments m_0..m_k")->required();

    auto* verify_cmd = app.add_subcommand("verify", "breakdown classification and mismatch check");
    add_common(verify_cmd, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(analyze_cmd)) {
            if (pattern.empty() && common.input.empty())
                throw ParseError("analyze needs an input file or --pattern");
            return cmd_analyze(common, pattern, exact_mode, max_degree);
        }
        if (app.got_subcommand(quad_cmd)) return cmd_quadrature(common, quad_n);
        if (app.got_subcommand(lanczos_cmd)) return cmd_lanczos(common, n_max, look_ahead);
        if (app.got_subcommand(realize_cmd)) return cmd_realize(common, realize_k);
        if (app.got_subcommand(verify_cmd)) return cmd_verify(common);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const HorizonExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InsufficientPattern& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NotRegularDegree& e) {
        std::cerr << "error: " << e.what();
        if (!e.nearest_regular.empty()) {
            std::cerr << "; nearest regular degrees:";
            for (std::size_t v : e.nearest_regular) std::cerr << " " << v;
        }
        std::cerr << "\n";
        return 4;
    } catch (const ZeroInitialCoupling& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const NoRealizableDegree& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 6;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#include "cli.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hrf::cli {

namespace {

// Polynomials in one variable, lowest degree first.
using Poly = std::vector<cplx>;

void trim(Poly& p) {
    while (p.size() > 1 && p.back() == cplx(0.0)) p.pop_back();
}

Poly add(const Poly& a, const Poly& b, double sign = 1.0) {
    Poly out(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += sign * b[i];
    trim(out);
    return out;
}

Poly mul(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    trim(out);
    return out;
}

bool is_zero(const Poly& p) { return p.size() == 1 && p[0] == cplx(0.0); }

struct Rational {
    Poly num{0.0};
    Poly den{1.0};
};

Rational r_add(const Rational& a, const Rational& b, double sign) {
    if (a.den == b.den) return {add(a.num, b.num, sign), a.den};
    return {add(mul(a.num, b.den), mul(b.num, a.den), sign), mul(a.den, b.den)};
}

Rational r_mul(const Rational& a, const Rational& b) { return {mul(a.num, b.num), mul(a.den, b.den)}; }

class ExpressionParser {
public:
    ExpressionParser(std::string text, Field field) : text_(std::move(text)), field_(field) {}

    Rational parse() {
        Rational r = expr();
        skip();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("map expression column " + std::to_string(pos_ + 1) + ": " + msg);
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool starts_primary() {
        const char c = peek();
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' || c == 'z' || c == 'w' || c == 'i';
    }

    Rational expr() {
        Rational r = term();
        for (char c = peek(); c == '+' || c == '-'; c = peek()) {
            ++pos_;
            r = r_add(r, term(), c == '+' ? 1.0 : -1.0);
        }
        return r;
    }

    Rational term() {
        Rational r = unary();
        while (true) {
            const char c = peek();
            if (c == '*') {
                ++pos_;
                r = r_mul(r, unary());
            } else if (c == '/') {
                ++pos_;
                const Rational d = unary();
                if (is_zero(d.num)) fail("division by zero");
                r = r_mul(r, {d.den, d.num});
            } else if (starts_primary()) {
                r = r_mul(r, power());
            } else {
                return r;
            }
        }
    }

    Rational unary() {
        const char c = peek();
        if (c == '-' || c == '+') {
            ++pos_;
            Rational r = unary();
            if (c == '-')
                for (auto& a : r.num) a = -a;
            return r;
        }
        return power();
    }

    Rational power() {
        const Rational base = primary();
        if (peek() != '^') return base;
        ++pos_;
        skip();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("exponent must be a nonnegative integer");
        const int e = std::stoi(text_.substr(start, pos_ - start));
        if (e > 64) fail("exponent too large");
        Rational r;
        r.num = {1.0};
        for (int k = 0; k < e; ++k) r = r_mul(r, base);
        return r;
    }

    Rational primary() {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            Rational r = expr();
            if (peek() != ')') fail("expected ')'");
            ++pos_;
            return r;
        }
        if (c == 'z' || c == 'w') {
            if (variable_ && *variable_ != c) fail("mixed variables z and w");
            variable_ = c;
            ++pos_;
            return {{0.0, 1.0}, {1.0}};
        }
        if (c == 'i') {
            if (field_ == Field::Real) fail("imaginary unit in a real map");
            ++pos_;
            return {{cplx(0.0, 1.0)}, {1.0}};
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            double v = 0;
            try {
                v = std::stod(text_.substr(pos_), &used);
            } catch (const std::exception&) {
                fail("bad number");
            }
            pos_ += used;
            return {{v}, {1.0}};
        }
        if (c == '\0') fail("unexpected end of input");
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string text_;
    Field field_;
    std::size_t pos_ = 0;
    std::optional<char> variable_;
};

std::vector<cplx> high_first(Poly p) {
    trim(p);
    return {p.rbegin(), p.rend()};
}

cplx parse_coefficient(const json& c, Field field) {
    cplx v;
    if (c.is_number()) {
        v = c.get<double>();
    } else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
        v = {c[0].get<double>(), c[1].get<double>()};
    } else {
        throw ParseError("map spec: coefficient must be a number or [re, im], got " + c.dump());
    }
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw ParseError("map spec: non-finite coefficient");
    if (field == Field::Real && v.imag() != 0.0) throw ParseError("map spec: complex coefficient in a real map");
    return v;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json point_json(const HyperbolicPoint& p) {
    const auto h = p.as_half_space();
    return {{"half_space", json::array({h.z.real(), h.z.imag(), h.t})}, {"ball", vec_json(p.as_ball())}};
}

json cplx_json(cplx c) { return json::array({c.real(), c.imag()}); }

json projective_json(const ProjectivePoint& p) {
    if (p.is_infinity()) return "inf";
    return cplx_json(p.affine_value());
}

HyperbolicPoint requested_point(const RunConfig& c, Field field) {
    if (c.at && c.ball) throw ParseError("--at and --ball are mutually exclusive");
    if (c.at) {
        const auto& a = *c.at;
        if (field == Field::Real && a[1] != 0.0) throw ParseError("--at: imaginary part must be 0 over R");
        return HyperbolicPoint::half_space(field, cplx(a[0], a[1]), a[2]);
    }
    if (c.ball) {
        const auto& b = *c.ball;
        if (field == Field::Real && b[1] != 0.0) throw ParseError("--ball: y must be 0 over R");
        return HyperbolicPoint::ball(field, Vec3(b[0], b[1], b[2]));
    }
    return HyperbolicPoint::base(field);
}

json header(const RunConfig& c, const MapSpec& m) {
    json cfg = c.to_json();
    cfg["map"] = m.to_json();
    return {{"schema", 1}, {"command", c.command}, {"config", cfg}};
}

}  // namespace

HomogeneousLift MapSpec::lift() const { return HomogeneousLift::from_rational(field, numerator, denominator); }

json MapSpec::to_json() const {
    json num = json::array(), den = json::array();
    for (auto c : numerator) num.push_back(cplx_json(c));
    for (auto c : denominator) den.push_back(cplx_json(c));
    return {{"field", field_name(field)}, {"numerator", num}, {"denominator", den}};
}

Field parse_field(const std::string& tag) {
    if (tag == "R") return Field::Real;
    if (tag == "C") return Field::Complex;
    throw ParseError("field must be R or C, got '" + tag + "'");
}

MapSpec parse_expression(const std::string& text, Field field) {
    const Rational r = ExpressionParser(text, field).parse();
    MapSpec m;
    m.field = field;
    Poly num = r.num, den = r.den;
    trim(num);
    trim(den);
    if (den.size() == 1) {
        for (auto& a : num) a /= den[0];
        den = {1.0};
    }
    m.numerator = high_first(num);
    m.denominator = high_first(den);
    if (std::max(m.numerator.size(), m.denominator.size()) < 2) throw ParseError("map expression: constant map");
    return m;
}

MapSpec parse_map_json(const json& j, std::optional<Field> field) {
    if (!j.is_object()) throw ParseError("map spec: expected a JSON object");
    MapSpec m;
    if (j.contains("field")) {
        if (!j["field"].is_string()) throw ParseError("map spec: field must be \"R\" or \"C\"");
        m.field = parse_field(j["field"].get<std::string>());
        if (field && *field != m.field) throw ParseError("map spec field disagrees with --field");
    } else {
        m.field = field.value_or(Field::Complex);
    }
    for (const char* key : {"numerator", "denominator"}) {
        if (!j.contains(key) || !j[key].is_array() || j[key].empty())
            throw ParseError(std::string("map spec: '") + key + "' must be a nonempty array");
        auto& dst = std::string(key) == "numerator" ? m.numerator : m.denominator;
        for (const auto& c : j[key]) dst.push_back(parse_coefficient(c, m.field));
    }
    return m;
}

json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(origin + ": JSON error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                         ": " + e.what());
    }
}

MapSpec load_map(const std::string& spec, std::optional<Field> field) {
    if (spec.empty()) throw ParseError("no map given (use --map)");
    std::string text = spec, origin = "inline map";
    std::error_code ec;
    if (spec.front() != '{' && std::filesystem::is_regular_file(spec, ec)) {
        text = read_file(spec);
        origin = spec;
    }
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (text[first] == '{' || text[first] == '['))
        return parse_map_json(parse_json_text(text, origin), field);
    return parse_expression(text, field.value_or(Field::Complex));
}

std::array<double, 3> parse_triple(const std::string& text, const std::string& flag) {
    std::array<double, 3> out{};
    std::istringstream in(text);
    std::string cell;
    int k = 0;
    while (std::getline(in, cell, ',')) {
        if (k == 3) throw ParseError(flag + ": expected three comma-separated numbers");
        try {
            std::size_t used = 0;
            out[k] = std::stod(cell, &used);
            if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw ParseError(flag + ": bad number '" + cell + "'");
        }
        ++k;
    }
    if (k != 3) throw ParseError(flag + ": expected three comma-separated numbers");
    return out;
}

json RunConfig::to_json() const {
    json j = {{"command", command}, {"map", map},   {"order", order},  {"tol", tol},
              {"seed", seed},       {"n_max", n_max}, {"measure", measure}};
    j["field"] = field ? json(field_name(*field)) : json(nullptr);
    j["at"] = at ? json(*at) : json(nullptr);
    j["ball"] = ball ? json(*ball) : json(nullptr);
    return j;
}

RunConfig RunConfig::from_json(const json& src) {
    const json& j = src.contains("config") ? src["config"] : src;
    if (!j.is_object()) throw ParseError("config: expected a JSON object");
    RunConfig c;
    try {
        if (j.contains("command")) c.command = j["command"].get<std::string>();
        if (j.contains("map")) c.map = j["map"].is_string() ? j["map"].get<std::string>() : j["map"].dump();
        if (j.contains("field") && !j["field"].is_null()) c.field = parse_field(j["field"].get<std::string>());
        if (j.contains("order")) c.order = j["order"].get<int>();
        if (j.contains("tol")) c.tol = j["tol"].get<double>();
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("n_max")) c.n_max = j["n_max"].get<int>();
        if (j.contains("at") && !j["at"].is_null()) c.at = j["at"].get<std::array<double, 3>>();
        if (j.contains("ball") && !j["ball"].is_null()) c.ball = j["ball"].get<std::array<double, 3>>();
        if (j.contains("measure")) c.measure = j["measure"].get<std::string>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    return c;
}

void RunConfig::validate() const {
    if (order < 4) throw ParseError("--order must be at least 4");
    if (!(tol > 0) || !std::isfinite(tol)) throw ParseError("--tol must be positive");
    if (n_max < 1) throw ParseError("--n-max must be at least 1");
    std::error_code ec;
    if (!measure.empty() && !std::filesystem::is_regular_file(measure, ec))
        throw ParseError("--measure: file '" + measure + "' does not exist");
}

void require_finite(const json& j, const std::string& path) {
    if (j.is_number_float() && !std::isfinite(j.get<double>())) throw Error("non-finite value at " + path);
    if (j.is_object())
        for (auto it = j.begin(); it != j.end(); ++it) require_finite(it.value(), path + "." + it.key());
    if (j.is_array())
        for (std::size_t i = 0; i < j.size(); ++i) require_finite(j[i], path + "[" + std::to_string(i) + "]");
}

CommandResult cmd_eval(const RunConfig& c) {
    const MapSpec m = load_map(c.map, c.field);
    const auto F = m.lift();
    const auto rule = build_rule(m.field, c.order);
    const auto p = requested_point(c, m.field);
    const auto ev = evaluate_rf(F, p, rule);
    json doc = header(c, m);
    doc["value"] = ev.value;
    doc["laplacian"] = ev.laplacian;
    doc["point"] = point_json(p);
    doc["log_scale"] = ev.log_scale_offset;
    if (ev.gradient) doc["gradient"] = vec_json(*ev.gradient);
    return {doc, kOk};
}

CommandResult cmd_minimize(const RunConfig& c) {
    const MapSpec m = load_map(c.map, c.field);
    const auto F = m.lift();
    const auto rule = build_rule(m.field, c.order);
    MinimizeOptions opt;
    opt.tolerance = c.tol;
    opt.seed = c.seed;
    if (c.at || c.ball) opt.warm_start = requested_point(c, m.field).as_ball();
    const auto r = minimize_rf(F, rule, opt);
    json doc = header(c, m);
    doc["minimizer"] = point_json(r.minimizer);
    doc["value"] = r.value;
    doc["m_K"] = r.m_K;
    doc["gradient_norm"] = r.gradient_norm;
    doc["hessian_conditioning"] = r.hessian_conditioning;
    doc["restarts"] = r.restarts;
    doc["iterations"] = r.iterations;
    doc["converged"] = r.converged;
    return {doc, r.converged ? kOk : kNonConvergence};
}

CommandResult cmd_asymptotics(const RunConfig& c) {
    const MapSpec m = load_map(c.map, c.field);
    if (m.field != Field::Complex) throw FieldMismatchError("asymptotics: complex maps only");
    AsymptoticsOptions opt;
    opt.n_max = c.n_max;
    opt.quadrature_order = c.order;
    opt.seed = c.seed;
    opt.minimize_tolerance = std::max(c.tol, 1e-10);
    const auto r = asymptotics(m.lift(), opt);

    json doc = header(c, m);
    json grid = json::array();
    for (const auto& g : r.grid) grid.push_back(vec_json(g));
    json traj = json::array();
    for (std::size_t k = 0; k < r.n_values.size(); ++k)
        traj.push_back({{"n", r.n_values[k]},
                        {"max_grid_error", r.max_grid_error[k]},
                        {"scaled_values", r.scaled_values[k]},
                        {"min_locus", vec_json(r.min_locus_trajectory[k])},
                        {"min_value_scaled", r.min_locus_values[k]},
                        {"dist_to_bary", r.dist_to_bary[k]}});
    doc["grid"] = grid;
    doc["gamma"] = r.gamma_values;
    doc["iterates"] = traj;
    doc["kappa1"] = r.kappa1;
    doc["C_F_empirical"] = r.C_F_empirical;
    doc["C_F_match"] = r.C_F_match;
    doc["bary_mu_f"] = vec_json(r.bary_mu_f);
    doc["bary_residual"] = r.bary_residual;
    doc["minimizer_radius_bound"] = r.minimizer_radius_bound;
    doc["minimizers_within_bound"] = r.minimizers_within_bound;
    doc["level_bound_holds"] = r.level_bound_holds;
    doc["sandwich_holds"] = r.sandwich_holds;
    doc["truncated"] = r.truncated;
    doc["n_budget"] = r.n_budget;

    if (!c.csv.empty()) {
        std::ofstream out(c.csv);
        if (!out) throw Error("cannot write '" + c.csv + "'");
        out.precision(17);
        out << "n,grid_x,grid_y,grid_z,scaled_rf,gamma,minloc_x,minloc_y,minloc_z,dist_to_bary\n";
        for (std::size_t k = 0; k < r.n_values.size(); ++k)
            for (std::size_t i = 0; i < r.grid.size(); ++i) {
                const auto& g = r.grid[i];
                const auto& ml = r.min_locus_trajectory[k];
                out << r.n_values[k] << ',' << g.x() << ',' << g.y() << ',' << g.z() << ',' << r.scaled_values[k][i]
                    << ',' << r.gamma_values[i] << ',' << ml.x() << ',' << ml.y() << ',' << ml.z() << ','
                    << r.dist_to_bary[k] << '\n';
            }
    }
    return {doc, kOk};
}

CommandResult cmd_barycenter(const RunConfig& c) {
    WeightedMeasure mu;
    json doc;
    if (!c.measure.empty()) {
        std::ifstream in(c.measure);
        mu = read_measure_csv(in);
        doc = {{"schema", 1}, {"command", c.command}, {"config", c.to_json()}};
        doc["source"] = "csv";
    } else {
        const MapSpec m = load_map(c.map, c.field);
        const RationalMap f(m.lift());
        EntropySampling s;
        s.seed = c.seed;
        s.depth = std::min(16, static_cast<int>(std::floor(std::log(kTreePointCap) / std::log(double(f.degree())))));
        mu = max_entropy_measure(f, s);
        doc = header(c, m);
        doc["source"] = "max_entropy_measure";
        doc["tree_depth"] = s.depth;
    }
    BarycenterOptions opt;
    opt.tolerance = std::min(c.tol, 1e-10);
    const bool admissible = is_admissible(mu);
    doc["points"] = mu.size();
    doc["admissible"] = admissible;
    if (!admissible) throw ConvergenceError("barycenter: measure is not admissible (an atom carries half the mass)");
    const auto r = solve_barycenter(mu, opt);
    doc["point"] = vec_json(r.point);
    doc["h_value"] = r.h_value;
    doc["residual"] = r.residual;
    doc["iterations"] = r.iterations;
    return {doc, kOk};
}

CommandResult cmd_capacity(const RunConfig& c) {
    const MapSpec m = load_map(c.map, c.field);
    const auto r = projective_capacity(m.lift(), build_rule(m.field, c.order));
    json doc = header(c, m);
    doc["pcap_preimage"] = r.pcap_preimage;
    doc["pcap_sphere"] = r.pcap_sphere;
    doc["r_of_lift"] = r.r_of_lift;
    return {doc, kOk};
}

CommandResult cmd_degree1(const RunConfig& c) {
    const MapSpec m = load_map(c.map, c.field);
    const RationalMap f(m.lift());
    const auto r = degree1_analysis(f, build_rule(m.field, c.order));
    json doc = header(c, m);
    const char* kinds[] = {"identity", "translation", "scaling"};
    doc["kind"] = kinds[static_cast<int>(r.kind)];
    doc["lambda"] = cplx_json(r.lambda);
    doc["m_K"] = r.m_K;
    doc["m_K_numeric"] = r.m_K_numeric;
    doc["min_locus"] = r.min_locus;
    json fps = json::array();
    for (const auto& p : r.fixed_points) fps.push_back(projective_json(p));
    doc["fixed_points"] = fps;
    doc["sample_point"] = r.sample_point ? point_json(*r.sample_point) : json(nullptr);
    return {doc, kOk};
}

CommandResult run(const RunConfig& config) {
    config.validate();
    CommandResult r;
    if (config.command == "eval") r = cmd_eval(config);
    else if (config.command == "minimize") r = cmd_minimize(config);
    else if (config.command == "asymptotics") r = cmd_asymptotics(config);
    else if (config.command == "barycenter") r = cmd_barycenter(config);
    else if (config.command == "capacity") r = cmd_capacity(config);
    else if (config.command == "degree1") r = cmd_degree1(config);
    else throw ParseError("unknown command '" + config.command + "'");
    require_finite(r.document);
    return r;
}

}  // namespace hrf::cli

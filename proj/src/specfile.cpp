#include "pqgeom/specfile.hpp"

#include "pqgeom/errors.hpp"

#include <Eigen/Eigenvalues>

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace pqgeom {

namespace {

struct Line {
    int number = 0;
    std::string key;                  // "g", "J1", "Gamma", "dimension", ...
    std::vector<std::size_t> indices; // 1-based as written
    std::string value;
};

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Strips a trailing comment that is not inside quotes.
std::string_view strip_comment(std::string_view s)
{
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') {
            quoted = !quoted;
        } else if (s[i] == '#' && !quoted) {
            return s.substr(0, i);
        }
    }
    return s;
}

std::vector<std::string> words(std::string_view s)
{
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string w;
    while (in >> w) {
        out.push_back(w);
    }
    return out;
}

double to_number(std::string_view s, int line, const char* what)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw SpecError(std::string(what) + ": '" + std::string(s) + "' is not a number", line);
    }
    return v;
}

std::size_t to_count(std::string_view s, int line, const char* what)
{
    s = trim(s);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw SpecError(std::string(what) + ": '" + std::string(s) + "' is not a non-negative integer", line);
    }
    return v;
}

Line split_line(std::string_view raw, int number)
{
    const auto eq = raw.find('=');
    if (eq == std::string_view::npos) {
        throw SpecError("expected 'key = value'", number);
    }
    Line l;
    l.number = number;
    std::string_view lhs = trim(raw.substr(0, eq));
    l.value = std::string(trim(raw.substr(eq + 1)));
    const auto open = lhs.find('(');
    if (open == std::string_view::npos) {
        l.key = std::string(lhs);
        return l;
    }
    if (lhs.back() != ')') {
        throw SpecError("unbalanced parentheses in '" + std::string(lhs) + "'", number);
    }
    l.key = std::string(trim(lhs.substr(0, open)));
    std::string_view inner = lhs.substr(open + 1, lhs.size() - open - 2);
    while (true) {
        const auto comma = inner.find(',');
        l.indices.push_back(to_count(inner.substr(0, comma), number, "index"));
        if (comma == std::string_view::npos) {
            break;
        }
        inner.remove_prefix(comma + 1);
    }
    return l;
}

std::string unquote(const std::string& v, int line)
{
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
        return v.substr(1, v.size() - 2);
    }
    if (!v.empty() && (v.front() == '"' || v.back() == '"')) {
        throw SpecError("unterminated string", line);
    }
    return v;
}

std::size_t arity(const std::string& key)
{
    if (key == "g" || key == "J1" || key == "J2" || key == "J3") {
        return 2;
    }
    if (key == "Gamma" || key == "S" || key == "c") {
        return 3;
    }
    return 0;
}

// Signature of g at the centre of the sample box; a cheap early diagnostic for
// missing or mistyped metric components.
void probe_signature(const ManifoldSpec& s, int line)
{
    const std::size_t d = s.dim;
    std::vector<double> c(d);
    for (std::size_t k = 0; k < d; ++k) {
        c[k] = 0.5 * (s.box_lo[k] + s.box_hi[k]);
    }
    Mat g(d, d);
    try {
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                g(i, j) = evaluate(s.g_at(i, j), c);
            }
        }
    } catch (const EvalError&) {
        return; // a pole at the centre says nothing about the signature elsewhere
    }
    const Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    std::size_t pos = 0, neg = 0, zero = 0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double v = es.eigenvalues()(k);
        if (std::abs(v) <= 1e-12 * scale) {
            ++zero;
        } else if (v > 0) {
            ++pos;
        } else {
            ++neg;
        }
    }
    if (zero > 0 || pos != d / 2) {
        throw SpecError("metric at the sample-box centre has signature (" + std::to_string(pos) + "," +
                            std::to_string(neg) + ") with " + std::to_string(zero) + " zero eigenvalue(s); expected (" +
                            std::to_string(d / 2) + "," + std::to_string(d / 2) + ")",
                        line);
    }
}

} // namespace

ManifoldSpec parse_spec(std::string_view text, std::string_view default_name)
{
    std::vector<Line> lines;
    int number = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++number;
        const std::string_view body = trim(strip_comment(raw));
        if (!body.empty()) {
            lines.push_back(split_line(body, number));
        }
    }

    std::map<std::string, const Line*> header;
    for (const auto& l : lines) {
        const std::size_t want = arity(l.key);
        if (want == 0) {
            if (!l.indices.empty()) {
                throw SpecError("key '" + l.key + "' takes no indices", l.number);
            }
            static const char* known[] = {"name",       "dimension", "mode", "coords", "connection",
                                          "sample_box", "sample_points"};
            if (std::find(std::begin(known), std::end(known), l.key) == std::end(known)) {
                throw SpecError("unknown key '" + l.key + "'", l.number);
            }
            if (header.count(l.key)) {
                throw SpecError("duplicate key '" + l.key + "'", l.number);
            }
            header[l.key] = &l;
        } else if (l.indices.size() != want) {
            throw SpecError(l.key + " needs " + std::to_string(want) + " indices", l.number);
        }
    }

    if (!header.count("dimension")) {
        throw SpecError("missing 'dimension'");
    }
    const Line& dl = *header["dimension"];
    const std::size_t dim = to_count(dl.value, dl.number, "dimension");
    if (dim == 0 || dim % 4 != 0) {
        throw SpecError("dimension must be a positive multiple of 4, got " + dl.value, dl.number);
    }
    Mode mode = Mode::chart;
    if (header.count("mode")) {
        const Line& l = *header["mode"];
        if (l.value == "chart") {
            mode = Mode::chart;
        } else if (l.value == "frame") {
            mode = Mode::frame;
        } else {
            throw SpecError("mode must be 'chart' or 'frame', got '" + l.value + "'", l.number);
        }
    }
    std::vector<std::string> coords;
    if (header.count("coords")) {
        const Line& l = *header["coords"];
        coords = words(l.value);
        if (coords.size() != dim) {
            throw SpecError("expected " + std::to_string(dim) + " coordinate names, got " + std::to_string(coords.size()),
                            l.number);
        }
        try {
            validate_coordinate_names(coords);
        } catch (const Error& e) {
            throw SpecError(e.what(), l.number);
        }
    }
    ManifoldSpec s = ManifoldSpec::blank(header.count("name") ? header["name"]->value : std::string(default_name), mode,
                                         dim, coords);
    if (header.count("connection")) {
        const Line& l = *header["connection"];
        if (l.value == "levi-civita") {
            s.connection = ConnectionKind::levi_civita;
        } else if (l.value == "explicit") {
            s.connection = ConnectionKind::explicit_gamma;
            s.gamma.assign(dim * dim * dim, ScalarExpr());
        } else if (l.value == "levi-civita-plus-S") {
            s.connection = ConnectionKind::levi_civita_plus_s;
            s.S.assign(dim * dim * dim, ScalarExpr());
        } else {
            throw SpecError("connection must be levi-civita, explicit or levi-civita-plus-S, got '" + l.value + "'",
                            l.number);
        }
    }
    if (header.count("sample_box")) {
        const Line& l = *header["sample_box"];
        const auto w = words(l.value);
        if (w.size() == 2) {
            s.box_lo.assign(dim, to_number(w[0], l.number, "sample_box"));
            s.box_hi.assign(dim, to_number(w[1], l.number, "sample_box"));
        } else if (w.size() == 2 * dim) {
            for (std::size_t k = 0; k < dim; ++k) {
                s.box_lo[k] = to_number(w[2 * k], l.number, "sample_box");
                s.box_hi[k] = to_number(w[2 * k + 1], l.number, "sample_box");
            }
        } else {
            throw SpecError("sample_box needs 2 or " + std::to_string(2 * dim) + " numbers", l.number);
        }
        for (std::size_t k = 0; k < dim; ++k) {
            if (!(s.box_lo[k] <= s.box_hi[k])) {
                throw SpecError("sample_box interval " + std::to_string(k + 1) + " is empty", l.number);
            }
        }
    }
    if (header.count("sample_points")) {
        const Line& l = *header["sample_points"];
        s.sample_points = to_count(l.value, l.number, "sample_points");
        if (s.sample_points == 0) {
            throw SpecError("sample_points must be positive", l.number);
        }
    }

    // Components. `seen` maps a flat slot to the line that set it explicitly.
    std::map<std::pair<std::string, std::size_t>, int> seen;
    std::map<std::pair<std::string, std::size_t>, int> mirrored;
    for (const auto& l : lines) {
        const std::size_t want = arity(l.key);
        if (want == 0) {
            continue;
        }
        for (std::size_t idx : l.indices) {
            if (idx < 1 || idx > dim) {
                throw SpecError(l.key + " index " + std::to_string(idx) + " outside 1.." + std::to_string(dim), l.number);
            }
        }
        const std::size_t i = l.indices[0] - 1, j = l.indices[1] - 1;
        if (l.key == "c") {
            if (mode != Mode::frame) {
                throw SpecError("structure constants c(k,i,j) are only allowed in frame mode", l.number);
            }
            const std::size_t k = l.indices[2] - 1;
            const double v = to_number(unquote(l.value, l.number), l.number, "c");
            const auto key = std::make_pair(std::string("c"), (i * dim + j) * dim + k);
            if (seen.count(key)) {
                throw SpecError("duplicate entry c(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
                                    std::to_string(k + 1) + ")",
                                l.number);
            }
            seen[key] = l.number;
            if (j == k && v != 0.0) {
                throw SpecError("c(k,i,i) must be zero", l.number);
            }
            const auto twin = std::make_pair(std::string("c"), (i * dim + k) * dim + j);
            if (seen.count(twin)) {
                if (s.structure(i, k, j) != -v) {
                    throw SpecError("c(k,i,j) and c(k,j,i) are not negatives of each other", l.number);
                }
            }
            s.structure(i, j, k) = v;
            s.structure(i, k, j) = -v;
            continue;
        }
        const std::string body = unquote(l.value, l.number);
        ScalarExpr e;
        try {
            e = parse_expr(body, s.coords);
        } catch (const ParseError& err) {
            throw SpecError(std::string("in ") + l.key + ": " + err.what(), l.number);
        }
        if (l.key == "Gamma" || l.key == "S") {
            const bool is_gamma = l.key == "Gamma";
            if (is_gamma && s.connection != ConnectionKind::explicit_gamma) {
                throw SpecError("Gamma components need 'connection = explicit'", l.number);
            }
            if (!is_gamma && s.connection != ConnectionKind::levi_civita_plus_s) {
                throw SpecError("S components need 'connection = levi-civita-plus-S'", l.number);
            }
            const std::size_t k = l.indices[2] - 1;
            const std::size_t flat = (i * dim + j) * dim + k;
            const auto key = std::make_pair(l.key, flat);
            if (seen.count(key)) {
                throw SpecError("duplicate entry " + l.key, l.number);
            }
            seen[key] = l.number;
            (is_gamma ? s.gamma : s.S)[flat] = e;
            continue;
        }
        // g, J1, J2, J3
        std::vector<ScalarExpr>& field = l.key == "g" ? s.g : s.J[static_cast<std::size_t>(l.key[1] - '1')];
        const auto key = std::make_pair(l.key, i * dim + j);
        if (seen.count(key)) {
            throw SpecError("duplicate entry " + l.key + "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")",
                            l.number);
        }
        seen[key] = l.number;
        field[i * dim + j] = e;
        if (l.key == "g" && i != j) {
            const auto twin = std::make_pair(l.key, j * dim + i);
            if (seen.count(twin)) {
                if (!(field[j * dim + i] == e)) {
                    throw SpecError("g(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                        ") differs from its transpose on line " + std::to_string(seen[twin]),
                                    l.number);
                }
            } else {
                field[j * dim + i] = e;
            }
        }
    }

    try {
        s.validate();
    } catch (const SpecError&) {
        throw;
    } catch (const Error& e) {
        throw SpecError(e.what());
    }
    int g_line = dl.number;
    for (const auto& l : lines) {
        if (l.key == "g") {
            g_line = l.number;
            break;
        }
    }
    probe_signature(s, g_line);
    return s;
}

ManifoldSpec load_spec(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw SpecError("cannot read spec file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str(), path.stem().string());
}

std::string emit_spec(const ManifoldSpec& s)
{
    std::ostringstream out;
    const std::size_t d = s.dim;
    out << "name = " << s.name << "\n";
    out << "dimension = " << d << "\n";
    out << "mode = " << (s.mode == Mode::chart ? "chart" : "frame") << "\n";
    out << "coords =";
    for (const auto& c : s.coords) {
        out << ' ' << c;
    }
    out << "\n";
    switch (s.connection) {
    case ConnectionKind::levi_civita: out << "connection = levi-civita\n"; break;
    case ConnectionKind::explicit_gamma: out << "connection = explicit\n"; break;
    case ConnectionKind::levi_civita_plus_s: out << "connection = levi-civita-plus-S\n"; break;
    }
    bool uniform = true;
    for (std::size_t k = 1; k < d; ++k) {
        uniform &= s.box_lo[k] == s.box_lo[0] && s.box_hi[k] == s.box_hi[0];
    }
    out << "sample_box =";
    for (std::size_t k = 0; k < (uniform ? 1 : d); ++k) {
        out << ' ' << format_number(s.box_lo[k]) << ' ' << format_number(s.box_hi[k]);
    }
    out << "\n";
    out << "sample_points = " << s.sample_points << "\n";
    auto expr = [&](const ScalarExpr& e) { return "\"" + serialize_expr(e, s.coords) + "\""; };
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            if (!s.g_at(i, j).is_zero()) {
                out << "g(" << i + 1 << "," << j + 1 << ") = " << expr(s.g_at(i, j)) << "\n";
            }
        }
    }
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                if (!s.J_at(a, i, j).is_zero()) {
                    out << "J" << a + 1 << "(" << i + 1 << "," << j + 1 << ") = " << expr(s.J_at(a, i, j)) << "\n";
                }
            }
        }
    }
    auto rank3 = [&](const std::vector<ScalarExpr>& f, const char* key) {
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                for (std::size_t k = 0; k < d; ++k) {
                    const ScalarExpr& e = f[(i * d + j) * d + k];
                    if (!e.is_zero()) {
                        out << key << "(" << i + 1 << "," << j + 1 << "," << k + 1 << ") = " << expr(e) << "\n";
                    }
                }
            }
        }
    };
    if (s.connection == ConnectionKind::explicit_gamma) {
        rank3(s.gamma, "Gamma");
    }
    if (s.connection == ConnectionKind::levi_civita_plus_s) {
        rank3(s.S, "S");
    }
    if (s.mode == Mode::frame) {
        for (std::size_t k = 0; k < d; ++k) {
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = i + 1; j < d; ++j) {
                    if (s.structure(k, i, j) != 0.0) {
                        out << "c(" << k + 1 << "," << i + 1 << "," << j + 1 << ") = " << format_number(s.structure(k, i, j))
                            << "\n";
                    }
                }
            }
        }
    }
    return out.str();
}

} // namespace pqgeom

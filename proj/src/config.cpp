#include "qstrip/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qstrip/errors.hpp"

namespace qstrip {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "': expected a number, got '" + value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        long v = std::stol(value, &pos);
        if (pos != value.size() || v < -(1L << 30) || v > (1L << 30))
            throw std::invalid_argument(value);
        return static_cast<int>(v);
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "': expected an integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1")
        return true;
    if (value == "false" || value == "0")
        return false;
    throw ConfigError("config: key '" + key + "': expected true/false, got '" + value + "'");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty())
            out.push_back(parse_int(key, item));
    }
    return out;
}

struct RawConfig {
    std::map<std::string, std::string> values; // "section.key" -> value
    std::vector<std::string> order;
};

RawConfig tokenize(const std::string& text) {
    RawConfig raw;
    std::string section;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: malformed section header at line " +
                                  std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected 'key = value' at line " + std::to_string(lineno));
        const std::string key = section + "." + trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (raw.values.count(key))
            throw ConfigError("config: duplicate key '" + key + "'");
        raw.values[key] = value;
        raw.order.push_back(key);
    }
    return raw;
}

const std::vector<std::string> kRequiredKeys = {
    "grid.X", "grid.Y", "grid.T", "grid.J", "grid.K", "grid.M",
    "packet.k", "packet.alpha", "packet.x0", "packet.y0", "potential.type",
};

RunConfig from_raw(RawConfig raw) {
    RunConfig cfg;
    std::set<std::string> seen;
    const auto take = [&](const std::string& key) -> const std::string* {
        auto it = raw.values.find(key);
        if (it == raw.values.end())
            return nullptr;
        seen.insert(key);
        return &it->second;
    };
    const auto need = [&](const std::string& key) -> const std::string& {
        const std::string* v = take(key);
        if (!v)
            throw ConfigError("config: missing required key '" + key + "'");
        return *v;
    };

    std::vector<std::string> missing;
    for (const auto& key : kRequiredKeys)
        if (!raw.values.count(key))
            missing.push_back(key);
    if (!missing.empty()) {
        std::string msg = "config: missing required keys:";
        for (const auto& key : missing)
            msg += " " + key;
        throw ConfigError(msg);
    }

    cfg.X = parse_double("grid.X", need("grid.X"));
    cfg.Y = parse_double("grid.Y", need("grid.Y"));
    cfg.T = parse_double("grid.T", need("grid.T"));
    cfg.J = parse_int("grid.J", need("grid.J"));
    cfg.K = parse_int("grid.K", need("grid.K"));
    cfg.M = parse_int("grid.M", need("grid.M"));

    if (const auto* v = take("physics.hbar"))
        cfg.physics.hbar = parse_double("physics.hbar", *v);
    if (const auto* v = take("physics.c_hbar"))
        cfg.physics.c_hbar = parse_double("physics.c_hbar", *v);
    if (const auto* v = take("physics.V_inf"))
        cfg.physics.V_inf = parse_double("physics.V_inf", *v);

    cfg.packet.k = parse_double("packet.k", need("packet.k"));
    cfg.packet.alpha = parse_double("packet.alpha", need("packet.alpha"));
    cfg.packet.x0 = parse_double("packet.x0", need("packet.x0"));
    cfg.packet.y0 = parse_double("packet.y0", need("packet.y0"));

    const std::string& type = need("potential.type");
    if (type == "zero") {
        cfg.potential_kind = PotentialKind::Zero;
    } else if (type == "poschl_teller") {
        cfg.potential_kind = PotentialKind::PoschlTeller;
        cfg.pt.alpha0 = parse_double("potential.alpha0", need("potential.alpha0"));
        cfg.pt.c1 = parse_double("potential.c1", need("potential.c1"));
        cfg.pt.x_star = parse_double("potential.x_star", need("potential.x_star"));
    } else if (type == "rectangular") {
        cfg.potential_kind = PotentialKind::Rectangular;
        cfg.rect.a = parse_double("potential.a", need("potential.a"));
        cfg.rect.b = parse_double("potential.b", need("potential.b"));
        cfg.rect.c = parse_double("potential.c", need("potential.c"));
        cfg.rect.d = parse_double("potential.d", need("potential.d"));
        cfg.rect.Q = parse_double("potential.Q", need("potential.Q"));
        if (const auto* v = take("potential.averaged"))
            cfg.averaged = parse_bool("potential.averaged", *v);
    } else {
        throw ConfigError("config: key 'potential.type': unknown potential '" + type +
                          "' (zero | poschl_teller | rectangular)");
    }

    if (const auto* v = take("run.geometry")) {
        if (*v == "semi-infinite")
            cfg.geometry = Geometry::SemiInfinite;
        else if (*v == "infinite-strip")
            cfg.geometry = Geometry::InfiniteStrip;
        else if (*v == "closed-box")
            cfg.geometry = Geometry::ClosedBox;
        else
            throw ConfigError("config: key 'run.geometry': unknown geometry '" + *v +
                              "' (semi-infinite | infinite-strip | closed-box)");
    }
    if (const auto* v = take("run.transform")) {
        if (*v == "fft")
            cfg.transform = TransformPath::Fft;
        else if (*v == "direct")
            cfg.transform = TransformPath::Direct;
        else
            throw ConfigError("config: key 'run.transform': expected fft or direct, got '" +
                              *v + "'");
    }
    if (const auto* v = take("run.threads"))
        cfg.threads = parse_int("run.threads", *v);
    if (const auto* v = take("run.debug_checks"))
        cfg.debug_checks = parse_bool("run.debug_checks", *v);
    if (const auto* v = take("run.snapshots"))
        cfg.snapshot_levels = parse_int_list("run.snapshots", *v);
    if (const auto* v = take("output.dir"))
        cfg.out_dir = *v;

    for (const auto& key : raw.order)
        if (!seen.count(key))
            throw ConfigError("config: unknown key '" + key + "'");

    validate_config(cfg);
    return cfg;
}

} // namespace

GridSpec config_grid(const RunConfig& cfg) {
    return build_grid(cfg.X, cfg.Y, cfg.T, cfg.J, cfg.K, cfg.M);
}

void validate_config(const RunConfig& cfg) {
    const GridSpec grid = config_grid(cfg); // positivity and counts
    if (cfg.transform == TransformPath::Fft && !grid.k_pow2)
        throw ConfigError("config: K=" + std::to_string(cfg.K) +
                          " is not a power of two; the fft transform requires K = 2^p — "
                          "set run.transform = direct to use the O(K^2) fallback");
    if (!(cfg.packet.alpha > 0.0))
        throw ConfigError("config: key 'packet.alpha' must be > 0");
    if (cfg.packet.x0 < 0.0 || cfg.packet.x0 > cfg.X || cfg.packet.y0 < 0.0 ||
        cfg.packet.y0 > cfg.Y)
        throw ConfigError("config: packet center (x0, y0) outside the domain rectangle");
    if (cfg.potential_kind == PotentialKind::Rectangular) {
        const auto& r = cfg.rect;
        if (!(0.0 < r.a && r.a < r.b && r.b < cfg.X && 0.0 < r.c && r.c < r.d && r.d < cfg.Y))
            throw ConfigError("config: rectangular barrier corners must satisfy "
                              "0 < a < b < X and 0 < c < d < Y");
        if (cfg.averaged) {
            if (mesh_node_index(r.a, grid.h_x, grid.J) < 0 ||
                mesh_node_index(r.b, grid.h_x, grid.J) < 0)
                throw ConfigError("config: averaged barrier edges a, b must lie on the x-mesh; "
                                  "choose J so that a*J/X and b*J/X are integers");
            if (mesh_node_index(r.c, grid.h_y, grid.K) < 0 ||
                mesh_node_index(r.d, grid.h_y, grid.K) < 0)
                throw ConfigError("config: averaged barrier edges c, d must lie on the y-mesh; "
                                  "choose K so that c*K/Y and d*K/Y are integers");
        }
    }
    for (int level : cfg.snapshot_levels)
        if (level < 0 || level > cfg.M)
            throw ConfigError("config: snapshot level " + std::to_string(level) +
                              " outside 0..M");
    if (cfg.threads < 0)
        throw ConfigError("config: key 'run.threads' must be >= 0");
}

TabulatedMesh config_potential_mesh(const RunConfig& cfg, const GridSpec& grid) {
    switch (cfg.potential_kind) {
    case PotentialKind::Zero:
        return tabulate_potential(PotentialSpec{ZeroPotential{}}, grid);
    case PotentialKind::PoschlTeller:
        return tabulate_potential(PotentialSpec{cfg.pt}, grid);
    case PotentialKind::Rectangular:
        if (cfg.averaged)
            return averaged_mesh_potential(cfg.rect, grid);
        return tabulate_potential(PotentialSpec{cfg.rect}, grid);
    }
    throw ConfigError("config: unreachable potential kind");
}

RunConfig parse_config(const std::string& text) {
    return from_raw(tokenize(text));
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::pair<RunConfig, StudySpec> parse_study_config(const std::string& text) {
    RawConfig raw = tokenize(text);
    StudySpec study;
    auto it = raw.values.find("study.directions");
    if (it == raw.values.end())
        throw ConfigError("config: missing required key 'study.directions'");
    for (char ch : it->second) {
        if (ch == 'x' || ch == 'y' || ch == 't')
            study.directions.push_back(ch);
        else if (ch != ',' && ch != ' ')
            throw ConfigError("config: key 'study.directions': expected a comma list of x,y,t");
    }
    if (study.directions.empty())
        throw ConfigError("config: key 'study.directions' is empty");
    raw.values.erase("study.directions");
    std::erase(raw.order, std::string("study.directions"));
    it = raw.values.find("study.ell_max");
    if (it == raw.values.end())
        throw ConfigError("config: missing required key 'study.ell_max'");
    study.ell_max = parse_int("study.ell_max", it->second);
    if (study.ell_max < 1)
        throw ConfigError("config: key 'study.ell_max' must be >= 1");
    raw.values.erase("study.ell_max");
    std::erase(raw.order, std::string("study.ell_max"));
    return {from_raw(std::move(raw)), study};
}

std::pair<RunConfig, StudySpec> parse_study_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open study config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_study_config(ss.str());
}

std::string emit_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "[grid]\n";
    out << "X = " << fmt17(cfg.X) << "\n";
    out << "Y = " << fmt17(cfg.Y) << "\n";
    out << "T = " << fmt17(cfg.T) << "\n";
    out << "J = " << cfg.J << "\n";
    out << "K = " << cfg.K << "\n";
    out << "M = " << cfg.M << "\n";
    out << "\n[physics]\n";
    out << "hbar = " << fmt17(cfg.physics.hbar) << "\n";
    out << "c_hbar = " << fmt17(cfg.physics.c_hbar) << "\n";
    out << "V_inf = " << fmt17(cfg.physics.V_inf) << "\n";
    out << "\n[packet]\n";
    out << "k = " << fmt17(cfg.packet.k) << "\n";
    out << "alpha = " << fmt17(cfg.packet.alpha) << "\n";
    out << "x0 = " << fmt17(cfg.packet.x0) << "\n";
    out << "y0 = " << fmt17(cfg.packet.y0) << "\n";
    out << "\n[potential]\n";
    switch (cfg.potential_kind) {
    case PotentialKind::Zero:
        out << "type = zero\n";
        break;
    case PotentialKind::PoschlTeller:
        out << "type = poschl_teller\n";
        out << "alpha0 = " << fmt17(cfg.pt.alpha0) << "\n";
        out << "c1 = " << fmt17(cfg.pt.c1) << "\n";
        out << "x_star = " << fmt17(cfg.pt.x_star) << "\n";
        break;
    case PotentialKind::Rectangular:
        out << "type = rectangular\n";
        out << "a = " << fmt17(cfg.rect.a) << "\n";
        out << "b = " << fmt17(cfg.rect.b) << "\n";
        out << "c = " << fmt17(cfg.rect.c) << "\n";
        out << "d = " << fmt17(cfg.rect.d) << "\n";
        out << "Q = " << fmt17(cfg.rect.Q) << "\n";
        out << "averaged = " << (cfg.averaged ? "true" : "false") << "\n";
        break;
    }
    out << "\n[run]\n";
    out << "geometry = "
        << (cfg.geometry == Geometry::SemiInfinite    ? "semi-infinite"
            : cfg.geometry == Geometry::InfiniteStrip ? "infinite-strip"
                                                      : "closed-box")
        << "\n";
    out << "transform = " << (cfg.transform == TransformPath::Fft ? "fft" : "direct") << "\n";
    out << "threads = " << cfg.threads << "\n";
    out << "debug_checks = " << (cfg.debug_checks ? "true" : "false") << "\n";
    if (!cfg.snapshot_levels.empty()) {
        out << "snapshots = ";
        for (size_t i = 0; i < cfg.snapshot_levels.size(); ++i)
            out << (i ? "," : "") << cfg.snapshot_levels[i];
        out << "\n";
    }
    if (!cfg.out_dir.empty()) {
        out << "\n[output]\n";
        out << "dir = " << cfg.out_dir << "\n";
    }
    return out.str();
}

} // namespace qstrip

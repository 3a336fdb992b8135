#include "vrs/config.hpp"

#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "vrs/csv.hpp"

namespace vrs {

std::string to_string(RunMode mode) {
    switch (mode) {
        case RunMode::resonance: return "resonance";
        case RunMode::detuning_sweep: return "detuning-sweep";
        case RunMode::hwp_sweep: return "hwp-sweep";
        case RunMode::complementarity: return "complementarity";
        case RunMode::fit: return "fit";
    }
    return "resonance";
}

QedParams RunConfig::qed_params() const {
    QedParams q;
    q.omega_a = omega_a;
    q.omega_c = omega_c;
    q.theta_a = theta_a;
    q.phi_qd = phi_qd;
    q.beta = beta;
    q.gamma = gamma;
    q.kappa = kappa;
    q.gamma_ph = gamma_ph;
    q.p_a = p_a;
    q.p_c = p_c;
    q.g_tilde = g > 0.0 ? calibrate_g_tilde(g, q) : 0.0;
    q.validate();
    return q;
}

double RunConfig::theta_effective() const {
    return theta_from_alpha ? hwp_to_theta(alpha) : theta;
}

DetectionParams RunConfig::detection_params() const {
    DetectionParams d;
    d.theta_proj = theta_effective();
    d.amp_a = 1.0;  // absolute scale is arbitrary; only A/B is observable
    d.amp_b = 1.0 / amp_ratio_ab;
    d.overlap_p = overlap_p;
    d.theta_c = theta_c;
    d.instrument_fwhm = instrument_fwhm;
    d.validate();
    return d;
}

FrequencyGrid RunConfig::frequency_grid() const {
    const double mean = 0.5 * (omega_a + omega_c);
    return FrequencyGrid(grid_start.value_or(mean - 250.0),
                         grid_stop.value_or(mean + 250.0), grid_points);
}

void RunConfig::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ValidationError(what);
    };
    require(gamma >= 0.0, "gamma must be nonnegative");
    require(kappa >= 0.0, "kappa must be nonnegative");
    require(gamma_ph >= 0.0, "gamma_ph must be nonnegative");
    require(p_a >= 0.0, "p_a must be nonnegative");
    require(p_c >= 0.0, "p_c must be nonnegative");
    require(g >= 0.0, "g must be nonnegative");
    require(theta_a >= 0.0 && theta_a <= 90.0, "theta_a must lie in [0, 90]");
    require(phi_qd >= 0.0 && phi_qd <= 180.0, "phi_qd must lie in [0, 180]");
    require(n_max >= 1, "n_max must be at least 1");
    require(amp_ratio_ab > 0.0, "amp_ratio_ab must be positive");
    require(overlap_p >= 0.0 && overlap_p <= 1.0,
            "overlap_p must lie in [0, 1]");
    require(instrument_fwhm >= 0.0, "instrument_fwhm must be nonnegative");
    require(grid_points >= 2, "points must be at least 2");
    const double mean = 0.5 * (omega_a + omega_c);
    require(grid_stop.value_or(mean + 250.0) > grid_start.value_or(mean - 250.0),
            "grid stop must exceed start");
    const bool needs_sweep =
        mode == RunMode::detuning_sweep || mode == RunMode::hwp_sweep;
    require(!needs_sweep || !sweep.empty(),
            "sweep must be nonempty for sweep modes");
    require(mode != RunMode::fit || !input_path.empty(),
            "input must be set for fit mode");
    require(!out_dir.empty(), "out must be nonempty");
    // Exercise the stricter per-field invariants too; anything they reject
    // is a configuration problem, not a numeric one.
    try {
        (void)qed_params();
        (void)detection_params();
    } catch (const InvalidInput& e) {
        throw ValidationError(e.what());
    }
}

namespace {

struct RawEntry {
    std::string value;
    int line;
};

double parse_number(const std::string& key, const std::string& text) {
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    double v = 0.0;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end)
        throw ValidationError("key '" + key + "' has a malformed number: '" +
                              text + "'");
    return v;
}

long parse_integer(const std::string& key, const std::string& text) {
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    long v = 0;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end)
        throw ValidationError("key '" + key + "' has a malformed integer: '" +
                              text + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw ValidationError("key '" + key + "' must be true or false");
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ',')) {
        const std::size_t b = item.find_first_not_of(" \t");
        const std::size_t e = item.find_last_not_of(" \t");
        if (b == std::string::npos)
            throw ValidationError("key '" + key + "' has an empty list item");
        out.push_back(parse_number(key, item.substr(b, e - b + 1)));
    }
    if (out.empty())
        throw ValidationError("key '" + key + "' has an empty list");
    return out;
}

std::string trim(const std::string& s) {
    const std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    std::map<std::string, RawEntry> entries;  // "section.key" -> value
    const std::set<std::string> known_sections = {"physics", "detection",
                                                  "grid", "run"};
    std::string section;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ParseError("unterminated section header", line_no,
                                 static_cast<int>(line.find('[')) + 1);
            section = trim(t.substr(1, t.size() - 2));
            if (!known_sections.count(section))
                throw ValidationError("unknown section '" + section + "'");
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value'", line_no, 1);
        if (section.empty())
            throw ParseError("key outside of a section", line_no, 1);
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ParseError("empty key", line_no, 1);
        if (value.empty())
            throw ParseError("empty value", line_no,
                             static_cast<int>(eq) + 2);
        const std::string full = section + "." + key;
        if (entries.count(full))
            throw ValidationError("duplicate key '" + key + "' in section [" +
                                  section + "]");
        entries[full] = RawEntry{value, line_no};
    }

    RunConfig cfg;
    bool saw_theta = false, saw_alpha = false;

    auto take = [&](const std::string& full) -> const RawEntry* {
        const auto it = entries.find(full);
        if (it == entries.end()) return nullptr;
        return &it->second;
    };
    std::set<std::string> consumed;
    auto number = [&](const std::string& full, double& slot) {
        if (const RawEntry* e = take(full)) {
            slot = parse_number(full.substr(full.find('.') + 1), e->value);
            consumed.insert(full);
        }
    };

    number("physics.omega_a", cfg.omega_a);
    number("physics.omega_c", cfg.omega_c);
    number("physics.g", cfg.g);
    number("physics.gamma", cfg.gamma);
    number("physics.kappa", cfg.kappa);
    number("physics.gamma_ph", cfg.gamma_ph);
    number("physics.p_a", cfg.p_a);
    number("physics.p_c", cfg.p_c);
    number("physics.theta_a", cfg.theta_a);
    number("physics.phi_qd", cfg.phi_qd);
    number("physics.beta", cfg.beta);
    if (const RawEntry* e = take("physics.n_max")) {
        cfg.n_max = static_cast<int>(parse_integer("n_max", e->value));
        consumed.insert("physics.n_max");
    }

    if (const RawEntry* e = take("detection.theta")) {
        cfg.theta = parse_number("theta", e->value);
        cfg.theta_from_alpha = false;
        saw_theta = true;
        consumed.insert("detection.theta");
    }
    if (const RawEntry* e = take("detection.alpha")) {
        cfg.alpha = parse_number("alpha", e->value);
        cfg.theta_from_alpha = true;
        saw_alpha = true;
        consumed.insert("detection.alpha");
    }
    if (saw_theta && saw_alpha)
        throw ValidationError("set either 'theta' or 'alpha', not both");
    number("detection.amp_ratio_ab", cfg.amp_ratio_ab);
    number("detection.overlap_p", cfg.overlap_p);
    number("detection.theta_c", cfg.theta_c);
    number("detection.instrument_fwhm", cfg.instrument_fwhm);

    if (const RawEntry* e = take("grid.start")) {
        cfg.grid_start = parse_number("start", e->value);
        consumed.insert("grid.start");
    }
    if (const RawEntry* e = take("grid.stop")) {
        cfg.grid_stop = parse_number("stop", e->value);
        consumed.insert("grid.stop");
    }
    if (const RawEntry* e = take("grid.points")) {
        const long p = parse_integer("points", e->value);
        if (p < 0) throw ValidationError("points must be positive");
        cfg.grid_points = static_cast<std::size_t>(p);
        consumed.insert("grid.points");
    }

    if (const RawEntry* e = take("run.mode")) {
        const std::string& m = e->value;
        if (m == "resonance") cfg.mode = RunMode::resonance;
        else if (m == "detuning-sweep") cfg.mode = RunMode::detuning_sweep;
        else if (m == "hwp-sweep") cfg.mode = RunMode::hwp_sweep;
        else if (m == "complementarity") cfg.mode = RunMode::complementarity;
        else if (m == "fit") cfg.mode = RunMode::fit;
        else throw ValidationError("unknown mode '" + m + "'");
        consumed.insert("run.mode");
    }
    if (const RawEntry* e = take("run.sweep")) {
        cfg.sweep = parse_list("sweep", e->value);
        consumed.insert("run.sweep");
    }
    if (const RawEntry* e = take("run.out")) {
        cfg.out_dir = e->value;
        consumed.insert("run.out");
    }
    if (const RawEntry* e = take("run.svg")) {
        cfg.svg = parse_bool("svg", e->value);
        consumed.insert("run.svg");
    }
    if (const RawEntry* e = take("run.input")) {
        cfg.input_path = e->value;
        consumed.insert("run.input");
    }

    for (const auto& [full, entry] : entries) {
        if (!consumed.count(full)) {
            const std::string key = full.substr(full.find('.') + 1);
            throw ValidationError("unknown key '" + key + "' in section [" +
                                  full.substr(0, full.find('.')) + "]");
        }
    }

    cfg.validate();
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    std::string out;
    out += "[physics]\n";
    out += "omega_a = " + format_double(cfg.omega_a) + "\n";
    out += "omega_c = " + format_double(cfg.omega_c) + "\n";
    out += "g = " + format_double(cfg.g) + "\n";
    out += "gamma = " + format_double(cfg.gamma) + "\n";
    out += "kappa = " + format_double(cfg.kappa) + "\n";
    out += "gamma_ph = " + format_double(cfg.gamma_ph) + "\n";
    out += "p_a = " + format_double(cfg.p_a) + "\n";
    out += "p_c = " + format_double(cfg.p_c) + "\n";
    out += "theta_a = " + format_double(cfg.theta_a) + "\n";
    out += "phi_qd = " + format_double(cfg.phi_qd) + "\n";
    out += "beta = " + format_double(cfg.beta) + "\n";
    out += "n_max = " + std::to_string(cfg.n_max) + "\n";
    out += "\n[detection]\n";
    if (cfg.theta_from_alpha)
        out += "alpha = " + format_double(cfg.alpha) + "\n";
    else
        out += "theta = " + format_double(cfg.theta) + "\n";
    out += "amp_ratio_ab = " + format_double(cfg.amp_ratio_ab) + "\n";
    out += "overlap_p = " + format_double(cfg.overlap_p) + "\n";
    out += "theta_c = " + format_double(cfg.theta_c) + "\n";
    out += "instrument_fwhm = " + format_double(cfg.instrument_fwhm) + "\n";
    out += "\n[grid]\n";
    if (cfg.grid_start) out += "start = " + format_double(*cfg.grid_start) + "\n";
    if (cfg.grid_stop) out += "stop = " + format_double(*cfg.grid_stop) + "\n";
    out += "points = " + std::to_string(cfg.grid_points) + "\n";
    out += "\n[run]\n";
    out += "mode = " + to_string(cfg.mode) + "\n";
    if (!cfg.sweep.empty()) {
        out += "sweep = ";
        for (std::size_t i = 0; i < cfg.sweep.size(); ++i) {
            if (i > 0) out += ", ";
            out += format_double(cfg.sweep[i]);
        }
        out += "\n";
    }
    out += "out = " + cfg.out_dir + "\n";
    out += std::string("svg = ") + (cfg.svg ? "true" : "false") + "\n";
    if (!cfg.input_path.empty()) out += "input = " + cfg.input_path + "\n";
    return out;
}

}  // namespace vrs

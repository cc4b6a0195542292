#include "tmmse/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace tmmse {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) parts.push_back(trim(item));
    return parts;
}

double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: value '" + text + "' for key '" + key +
                                    "' is not a number");
    }
}

std::size_t parse_count(const std::string& key, const std::string& text) {
    const double v = parse_double(key, text);
    if (!(v >= 0.0) || v != static_cast<double>(static_cast<std::size_t>(v)))
        throw std::invalid_argument("config: value for '" + key +
                                    "' must be a nonnegative integer");
    return static_cast<std::size_t>(v);
}

std::vector<std::size_t> parse_dims(const std::string& key, const std::string& text) {
    std::vector<std::size_t> dims;
    for (const std::string& part : split(text, ','))
        dims.push_back(parse_count(key, part));
    if (dims.empty()) throw std::invalid_argument("config: '" + key + "' list is empty");
    return dims;
}

}  // namespace

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> values;
    for (const std::string& part : split(text, ','))
        if (!part.empty()) values.push_back(parse_double("values", part));
    if (values.empty()) throw std::invalid_argument("config: sweep value list is empty");
    return values;
}

Campaign desk_campaign() {
    Campaign c;
    c.sweep = SweepVar::snr_db;
    c.values = {0.0, 10.0, 20.0, 30.0};
    c.trials = 100;
    c.master_seed = 1;
    c.out_path = "desk_results.csv";

    c.base.scenario.antennas = 64;
    c.base.scenario.users = 4;
    c.base.scenario.taps = 5;
    c.base.scenario.paths = 5;
    c.base.scenario.frame_len = 600;
    c.base.scenario.sigma_s2 = 1.0;
    c.base.scenario.snr_db = 20.0;

    c.base.eq.dims = {4, 4, 4};
    c.base.eq.rank = 3;
    c.base.eq.max_iters = 20;
    c.base.eq.epsilon = 0.1;
    c.base.eq.loading = 1e-8;
    c.base.eq.init = CpInit::canonical_perturbed;

    c.base.sample_loading = 0.0;
    c.base.target_user = 0;
    return c;
}

Campaign load_campaign(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");

    Campaign c = desk_campaign();
    std::string section;
    std::string line;
    std::size_t lineno = 0;

    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config: malformed section at line " +
                                            std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            if (section != "campaign" && section != "scenario" && section != "equalizer")
                throw std::invalid_argument("config: unknown section '" + section + "'");
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key = value at line " +
                                        std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config: empty key or value at line " +
                                        std::to_string(lineno));

        if (section == "campaign") {
            if (key == "sweep") c.sweep = parse_sweep_var(value);
            else if (key == "values") c.values = parse_value_list(value);
            else if (key == "trials") c.trials = parse_count(key, value);
            else if (key == "master_seed") c.master_seed = static_cast<std::uint64_t>(
                         parse_double(key, value));
            else if (key == "out") c.out_path = value;
            else throw std::invalid_argument("config: unknown key '" + key + "' in [campaign]");
        } else if (section == "scenario") {
            if (key == "N" || key == "antennas") c.base.scenario.antennas = parse_count(key, value);
            else if (key == "U" || key == "users") c.base.scenario.users = parse_count(key, value);
            else if (key == "Q" || key == "taps") c.base.scenario.taps = parse_count(key, value);
            else if (key == "L" || key == "paths") c.base.scenario.paths = parse_count(key, value);
            else if (key == "K" || key == "frame_len")
                c.base.scenario.frame_len = parse_count(key, value);
            else if (key == "sigma_s2") c.base.scenario.sigma_s2 = parse_double(key, value);
            else if (key == "snr_db") c.base.scenario.snr_db = parse_double(key, value);
            else throw std::invalid_argument("config: unknown key '" + key + "' in [scenario]");
        } else if (section == "equalizer") {
            if (key == "dims") c.base.eq.dims = parse_dims(key, value);
            else if (key == "R" || key == "rank") c.base.eq.rank = parse_count(key, value);
            else if (key == "max_iters") c.base.eq.max_iters = parse_count(key, value);
            else if (key == "epsilon") c.base.eq.epsilon = parse_double(key, value);
            else if (key == "loading") c.base.eq.loading = parse_double(key, value);
            else if (key == "init") c.base.eq.init = parse_cp_init(value);
            else if (key == "sample_loading")
                c.base.sample_loading = parse_double(key, value);
            else if (key == "target_user") c.base.target_user = parse_count(key, value);
            else if (key == "equalizers") {
                c.base.equalizers = split(value, ',');
            } else
                throw std::invalid_argument("config: unknown key '" + key + "' in [equalizer]");
        } else {
            throw std::invalid_argument("config: key '" + key + "' appears before any section");
        }
    }

    c.base.validate();
    return c;
}

}  // namespace tmmse

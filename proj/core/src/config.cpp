#include "icclink/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace icc {

namespace {

std::string trim(std::string_view s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return std::string(s.substr(begin, end - begin));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(trim(s.substr(start)));
            break;
        }
        parts.push_back(trim(s.substr(start, pos - start)));
        start = pos + 1;
    }
    return parts;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad numeric value for '" + key + "': " + value);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw std::invalid_argument("config: bad integer value for '" + key + "': " + value);
    return v;
}

std::pair<std::size_t, std::size_t> parse_scenario_dims(const std::string& token) {
    const std::size_t pos = token.find('x');
    if (pos == std::string::npos)
        throw std::invalid_argument("config: scenario must look like NxK, got '" + token + "'");
    const std::string n = trim(token.substr(0, pos));
    const std::string k = trim(token.substr(pos + 1));
    return {static_cast<std::size_t>(parse_u64("scenarios", n)),
            static_cast<std::size_t>(parse_u64("scenarios", k))};
}

std::string mean_mode_name(MeanMode m) {
    return m == MeanMode::Adaptive ? "adaptive" : "known-zero";
}

RunConfig preset(std::size_t n_antennas, std::initializer_list<std::size_t> user_counts) {
    RunConfig cfg;
    cfg.system.data_power = 0.99;
    cfg.system.compute_variance = 0.01;
    cfg.system.compute_mean = 0.0;
    cfg.system.channel_variance = 1.0;
    cfg.system.damping_data = 0.5;
    cfg.system.damping_compute = 0.8;
    cfg.system.iterations = 30;
    cfg.system.n_antennas = n_antennas;
    cfg.scenario_antennas.clear();
    cfg.scenario_users.clear();
    for (std::size_t k : user_counts) {
        cfg.scenario_antennas.push_back(n_antennas);
        cfg.scenario_users.push_back(k);
    }
    cfg.variants = {Variant::JointAdaptive, Variant::JointKnownZero, Variant::GenieData,
                    Variant::GenieCompute};
    cfg.snr_min_db = 0.0;
    cfg.snr_max_db = 32.0;
    cfg.snr_step_db = 4.0;
    return cfg;
}

}  // namespace

std::vector<double> RunConfig::snr_grid() const {
    std::vector<double> grid;
    for (double snr = snr_min_db; snr <= snr_max_db + 1e-9; snr += snr_step_db)
        grid.push_back(snr);
    return grid;
}

std::vector<Scenario> RunConfig::scenarios() const {
    std::vector<Scenario> out;
    std::vector<std::size_t> antennas = scenario_antennas;
    std::vector<std::size_t> users = scenario_users;
    if (antennas.empty()) {
        antennas.push_back(system.n_antennas);
        users.push_back(system.n_users);
    }
    for (std::size_t i = 0; i < antennas.size(); ++i) {
        for (Variant v : variants) {
            Scenario sc;
            sc.name = "N" + std::to_string(antennas[i]) + "K" + std::to_string(users[i]);
            sc.n_antennas = antennas[i];
            sc.n_users = users[i];
            sc.variant = v;
            out.push_back(std::move(sc));
        }
    }
    return out;
}

void RunConfig::validate() const {
    if (scenario_antennas.size() != scenario_users.size())
        throw std::invalid_argument("config: scenario lists out of sync");
    if (variants.empty()) throw std::invalid_argument("config: at least one variant is required");
    if (!(snr_step_db > 0.0)) throw std::invalid_argument("config: snr_step_db must be positive");
    if (snr_max_db < snr_min_db)
        throw std::invalid_argument("config: snr_max_db must not be below snr_min_db");
    if (stopping.max_trials == 0) throw std::invalid_argument("config: max_trials must be positive");
    if (stopping.min_trials > stopping.max_trials)
        throw std::invalid_argument("config: min_trials must not exceed max_trials");
    if (output_path.empty()) throw std::invalid_argument("config: output path is empty");
    // Scenario dimensions are validated per point; validate the base here.
    for (std::size_t i = 0; i < scenario_antennas.size(); ++i) {
        SystemConfig probe = system;
        probe.n_antennas = scenario_antennas[i];
        probe.n_users = scenario_users[i];
        probe.validate();
    }
    if (scenario_antennas.empty()) system.validate();
}

RunConfig parse_run_config(std::istream& in) {
    RunConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                        " is not a key = value pair");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                        " has an empty key or value");

        if (key == "n_antennas") cfg.system.n_antennas = parse_u64(key, value);
        else if (key == "n_users") cfg.system.n_users = parse_u64(key, value);
        else if (key == "data_power") cfg.system.data_power = parse_double(key, value);
        else if (key == "compute_variance") cfg.system.compute_variance = parse_double(key, value);
        else if (key == "compute_mean") cfg.system.compute_mean = parse_double(key, value);
        else if (key == "channel_variance") cfg.system.channel_variance = parse_double(key, value);
        else if (key == "damping_data") cfg.system.damping_data = parse_double(key, value);
        else if (key == "damping_compute") cfg.system.damping_compute = parse_double(key, value);
        else if (key == "iterations")
            cfg.system.iterations = static_cast<int>(parse_u64(key, value));
        else if (key == "mean_mode") {
            if (value == "adaptive") cfg.system.mean_mode = MeanMode::Adaptive;
            else if (value == "known-zero") cfg.system.mean_mode = MeanMode::KnownZero;
            else throw std::invalid_argument("config: mean_mode must be adaptive or known-zero");
        } else if (key == "scenarios") {
            cfg.scenario_antennas.clear();
            cfg.scenario_users.clear();
            for (const std::string& token : split(value, ',')) {
                if (token.empty()) continue;
                const auto [n, k] = parse_scenario_dims(token);
                cfg.scenario_antennas.push_back(n);
                cfg.scenario_users.push_back(k);
            }
        } else if (key == "variants") {
            cfg.variants.clear();
            for (const std::string& token : split(value, ',')) {
                if (token.empty()) continue;
                const auto v = parse_variant(token);
                if (!v) throw std::invalid_argument("config: unknown variant '" + token + "'");
                cfg.variants.push_back(*v);
            }
        } else if (key == "snr_min_db") cfg.snr_min_db = parse_double(key, value);
        else if (key == "snr_max_db") cfg.snr_max_db = parse_double(key, value);
        else if (key == "snr_step_db") cfg.snr_step_db = parse_double(key, value);
        else if (key == "min_trials") cfg.stopping.min_trials = parse_u64(key, value);
        else if (key == "min_bit_errors") cfg.stopping.min_bit_errors = parse_u64(key, value);
        else if (key == "max_trials") cfg.stopping.max_trials = parse_u64(key, value);
        else if (key == "workers") cfg.workers = static_cast<unsigned>(parse_u64(key, value));
        else if (key == "seed") cfg.master_seed = parse_u64(key, value);
        else if (key == "out") cfg.output_path = value;
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    return cfg;
}

RunConfig parse_run_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    return parse_run_config(in);
}

void serialize_run_config(std::ostream& os, const RunConfig& cfg) {
    os.imbue(std::locale::classic());
    const auto num = [&os](double v) {
        std::ostringstream oss;
        oss.imbue(std::locale::classic());
        oss.precision(17);
        oss << v;
        os << oss.str();
    };
    os << "n_antennas = " << cfg.system.n_antennas << '\n';
    os << "n_users = " << cfg.system.n_users << '\n';
    os << "data_power = ";
    num(cfg.system.data_power);
    os << '\n';
    os << "compute_variance = ";
    num(cfg.system.compute_variance);
    os << '\n';
    os << "compute_mean = ";
    num(cfg.system.compute_mean);
    os << '\n';
    os << "channel_variance = ";
    num(cfg.system.channel_variance);
    os << '\n';
    os << "damping_data = ";
    num(cfg.system.damping_data);
    os << '\n';
    os << "damping_compute = ";
    num(cfg.system.damping_compute);
    os << '\n';
    os << "iterations = " << cfg.system.iterations << '\n';
    os << "mean_mode = " << mean_mode_name(cfg.system.mean_mode) << '\n';
    if (!cfg.scenario_antennas.empty()) {
        os << "scenarios = ";
        for (std::size_t i = 0; i < cfg.scenario_antennas.size(); ++i) {
            if (i) os << ',';
            os << cfg.scenario_antennas[i] << 'x' << cfg.scenario_users[i];
        }
        os << '\n';
    }
    os << "variants = ";
    for (std::size_t i = 0; i < cfg.variants.size(); ++i) {
        if (i) os << ',';
        os << variant_name(cfg.variants[i]);
    }
    os << '\n';
    os << "snr_min_db = ";
    num(cfg.snr_min_db);
    os << '\n';
    os << "snr_max_db = ";
    num(cfg.snr_max_db);
    os << '\n';
    os << "snr_step_db = ";
    num(cfg.snr_step_db);
    os << '\n';
    os << "min_trials = " << cfg.stopping.min_trials << '\n';
    os << "min_bit_errors = " << cfg.stopping.min_bit_errors << '\n';
    os << "max_trials = " << cfg.stopping.max_trials << '\n';
    os << "workers = " << cfg.workers << '\n';
    os << "seed = " << cfg.master_seed << '\n';
    os << "out = " << cfg.output_path << '\n';
}

RunConfig small_system_preset() {
    RunConfig cfg = preset(10, {2, 5, 10});
    cfg.stopping = StoppingRule{1000, 100, 200000};
    cfg.output_path = "fig2.csv";
    return cfg;
}

RunConfig massive_system_preset() {
    RunConfig cfg = preset(200, {50, 100, 200});
    cfg.stopping = StoppingRule{200, 100, 5000};
    cfg.output_path = "fig3.csv";
    return cfg;
}

}  // namespace icc

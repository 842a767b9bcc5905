#include "fsb/config.hpp"

#include "fsb/report_io.hpp"

#include <cctype>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsb {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void parse_fail(const std::string& origin, int line, const std::string& what) {
    std::ostringstream os;
    os << origin << ":" << line << ": " << what;
    throw std::invalid_argument(os.str());
}

template <class T>
T parse_number(const std::string& token, const std::string& origin, int line,
               const std::string& key) {
    T value{};
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        parse_fail(origin, line, "key '" + key + "': malformed number '" + token + "'");
    return value;
}

template <class T>
std::vector<T> parse_list(const std::string& value, const std::string& origin, int line,
                          const std::string& key) {
    std::vector<T> out;
    std::size_t pos = 0;
    while (pos <= value.size()) {
        const std::size_t comma = value.find(',', pos);
        const std::string token =
            trim(value.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (token.empty())
            parse_fail(origin, line, "key '" + key + "': empty entry in list '" + value + "'");
        out.push_back(parse_number<T>(token, origin, line, key));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) parse_fail(origin, line, "key '" + key + "': empty list");
    return out;
}

bool parse_bool(const std::string& token, const std::string& origin, int line,
                const std::string& key) {
    if (token == "true" || token == "1") return true;
    if (token == "false" || token == "0") return false;
    parse_fail(origin, line, "key '" + key + "': expected true/false, got '" + token + "'");
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i]);
    }
    return out;
}

std::string join(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

}  // namespace

FileConfig parse_config_text(const std::string& text, const std::string& origin) {
    FileConfig cfg;
    std::istringstream is(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            parse_fail(origin, line_no, "expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) parse_fail(origin, line_no, "missing key before '='");

        if (key == "alpha")
            cfg.alpha = parse_number<double>(value, origin, line_no, key);
        else if (key == "delta")
            cfg.delta = parse_number<double>(value, origin, line_no, key);
        else if (key == "poly_coeffs")
            cfg.poly_coeffs = parse_list<double>(value, origin, line_no, key);
        else if (key == "u0_mode")
            cfg.u0_mode = parse_number<int>(value, origin, line_no, key);
        else if (key == "u0_coeffs")
            cfg.u0_coeffs = parse_list<double>(value, origin, line_no, key);
        else if (key == "T")
            cfg.T = parse_number<double>(value, origin, line_no, key);
        else if (key == "N")
            cfg.N = parse_number<int>(value, origin, line_no, key);
        else if (key == "M")
            cfg.M = parse_number<int>(value, origin, line_no, key);
        else if (key == "M_base")
            cfg.M_base = parse_number<int>(value, origin, line_no, key);
        else if (key == "G")
            cfg.G = parse_number<int>(value, origin, line_no, key);
        else if (key == "seed")
            cfg.seed = parse_number<std::uint64_t>(value, origin, line_no, key);
        else if (key == "n_seeds")
            cfg.n_seeds = parse_number<int>(value, origin, line_no, key);
        else if (key == "N_list")
            cfg.N_list = parse_list<int>(value, origin, line_no, key);
        else if (key == "M_list")
            cfg.M_list = parse_list<int>(value, origin, line_no, key);
        else if (key == "lag_cap")
            cfg.lag_cap = parse_number<int>(value, origin, line_no, key);
        else if (key == "strict")
            cfg.strict = parse_bool(value, origin, line_no, key);
        else if (key == "blowup_threshold")
            cfg.blowup_threshold = parse_number<double>(value, origin, line_no, key);
        else
            parse_fail(origin, line_no, "unknown key '" + key + "'");
    }
    cfg.to_solve_config().validate();  // fail at parse time, not mid-run
    return cfg;
}

FileConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

SolveConfig FileConfig::to_solve_config() const {
    SolveConfig cfg;
    cfg.frac.alpha = alpha;
    cfg.delta = delta;
    cfg.f = Polynomial(poly_coeffs);
    if (!u0_coeffs.empty()) {
        cfg.u0 = Eigen::Map<const Eigen::VectorXd>(u0_coeffs.data(),
                                                   Eigen::Index(u0_coeffs.size()));
    } else {
        if (u0_mode < 1 || u0_mode > N)
            throw std::invalid_argument("u0_mode = " + std::to_string(u0_mode) +
                                        " must lie in [1, N = " + std::to_string(N) + "]");
        Eigen::VectorXd u0 = Eigen::VectorXd::Zero(u0_mode);
        u0[u0_mode - 1] = 1.0;
        cfg.u0 = u0;
    }
    cfg.T = T;
    cfg.n_modes = N;
    cfg.n_steps = M;
    cfg.grid_size = G;
    cfg.noise.seed = seed;
    cfg.noise.n_modes = N;
    cfg.noise.base_steps = M_base;
    cfg.noise.T = T;
    cfg.diag_lag_cap = lag_cap;
    cfg.blowup_threshold = blowup_threshold;
    return cfg;
}

std::string RunManifest::canonical_text() const {
    std::ostringstream os;
    os << "subcommand=" << subcommand << '\n'
       << "config_path=" << config_path << '\n'
       << "output_dir=" << output_dir << '\n'
       << "tool_version=" << tool_version << '\n'
       << "rng=" << rng_identifier << '\n'
       << "git_ref=" << git_ref << '\n'
       << "strict=" << (strict ? 1 : 0) << '\n'
       << "alpha=" << format_double(config.alpha) << '\n'
       << "delta=" << format_double(config.delta) << '\n'
       << "poly_coeffs=" << join(config.poly_coeffs) << '\n'
       << "u0_mode=" << config.u0_mode << '\n'
       << "u0_coeffs=" << join(config.u0_coeffs) << '\n'
       << "T=" << format_double(config.T) << '\n'
       << "N=" << config.N << '\n'
       << "M=" << config.M << '\n'
       << "M_base=" << config.M_base << '\n'
       << "G=" << config.G << '\n'
       << "seed=" << config.seed << '\n'
       << "n_seeds=" << config.n_seeds << '\n'
       << "N_list=" << join(config.N_list) << '\n'
       << "M_list=" << join(config.M_list) << '\n'
       << "lag_cap=" << config.lag_cap << '\n'
       << "config_strict=" << (config.strict ? 1 : 0) << '\n'
       << "blowup_threshold=" << format_double(config.blowup_threshold) << '\n';
    return os.str();
}

std::uint64_t RunManifest::hash() const {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a 64-bit offset basis
    for (const unsigned char c : canonical_text()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

RunManifest make_manifest(const std::string& subcommand, const FileConfig& cfg,
                          const std::string& config_path, const std::string& output_dir) {
    RunManifest m;
    m.subcommand = subcommand;
    m.config_path = config_path;
    m.config = cfg;
    m.output_dir = output_dir;
    m.tool_version = tool_version();
    m.rng_identifier = rng_id();
    m.git_ref = build_git_ref();
    m.strict = cfg.strict;

    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    m.timestamp = buf;
    return m;
}

const char* build_git_ref() {
#ifdef FSB_GIT_REF
    return FSB_GIT_REF;
#else
    return "unknown";
#endif
}

}  // namespace fsb

#include "nrd/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "nrd/errors.hpp"
#include "nrd/io.hpp"

namespace nrd {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, long line) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw config_error("line " + std::to_string(line) + ": expected a number, got '" + v + "'");
    }
}

long parse_long(const std::string& v, long line) {
    try {
        std::size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw config_error("line " + std::to_string(line) + ": expected an integer, got '" + v +
                           "'");
    }
}

bool parse_bool(const std::string& v, long line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw config_error("line " + std::to_string(line) + ": expected true/false, got '" + v + "'");
}

std::vector<std::pair<double, double>> parse_pairs(const std::string& v, long line) {
    // comma-separated alpha:L items
    std::vector<std::pair<double, double>> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw config_error("line " + std::to_string(line) + ": sweep pair '" + item +
                               "' is not alpha:L");
        out.emplace_back(parse_double(trim(item.substr(0, colon)), line),
                         parse_double(trim(item.substr(colon + 1)), line));
    }
    return out;
}

} // namespace

KernelSpec RunConfig::make_kernel_spec() const {
    if (kernel.family == "gaussian") {
        auto s = KernelSpec::gaussian(kernel.sigma);
        s.renormalize = kernel.renormalize;
        return s;
    }
    if (kernel.family == "bump") {
        auto s = KernelSpec::bump(kernel.r);
        s.renormalize = kernel.renormalize;
        return s;
    }
    if (kernel.family == "table") {
        if (kernel.table_path.empty())
            throw config_error("kernel.family=table needs kernel.table_path");
        return KernelSpec::tabulated(load_table(kernel.table_path), kernel.renormalize);
    }
    throw config_error("unknown kernel.family '" + kernel.family + "'");
}

Nonlinearity RunConfig::make_nonlinearity() const {
    if (reaction.family == "cubic") return Nonlinearity::cubic(reaction.alpha);
    if (reaction.family == "table") {
        if (reaction.table_path.empty())
            throw config_error("reaction.family=table needs reaction.table_path");
        return Nonlinearity::tabulated(load_table(reaction.table_path));
    }
    throw config_error("unknown reaction.family '" + reaction.family + "'");
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig c;
    std::stringstream ss(text);
    std::string raw;
    long line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(line) + ": expected key=value");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));

        if (key == "kernel.family") c.kernel.family = val;
        else if (key == "kernel.sigma") c.kernel.sigma = parse_double(val, line);
        else if (key == "kernel.r") c.kernel.r = parse_double(val, line);
        else if (key == "kernel.table_path") c.kernel.table_path = val;
        else if (key == "kernel.renormalize") c.kernel.renormalize = parse_bool(val, line);
        else if (key == "reaction.family") c.reaction.family = val;
        else if (key == "reaction.alpha") c.reaction.alpha = parse_double(val, line);
        else if (key == "reaction.table_path") c.reaction.table_path = val;
        else if (key == "grid.X") c.grid.X = parse_double(val, line);
        else if (key == "grid.M") c.grid.M = parse_long(val, line);
        else if (key == "time.T") c.time.T = parse_double(val, line);
        else if (key == "time.N") c.time.N = parse_long(val, line);
        else if (key == "init.L") c.init.L = parse_double(val, line);
        else if (key == "output.dir") c.output.dir = val;
        else if (key == "output.snapshots") c.output.snapshots = val;
        else if (key == "output.precision") c.output.precision = static_cast<int>(parse_long(val, line));
        else if (key == "energy.stride") c.energy.stride = parse_long(val, line);
        else if (key == "sweep.pairs") c.sweep.pairs = parse_pairs(val, line);
        else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_long(val, line));
        else throw config_error("line " + std::to_string(line) + ": unknown key '" + key + "'");
    }

    if (c.kernel.family != "gaussian" && c.kernel.family != "bump" && c.kernel.family != "table")
        throw config_error("unknown kernel.family '" + c.kernel.family + "'");
    if (c.reaction.family != "cubic" && c.reaction.family != "table")
        throw config_error("unknown reaction.family '" + c.reaction.family + "'");
    if (c.output.snapshots != "dyadic" && c.output.snapshots != "all" &&
        c.output.snapshots != "none")
        throw config_error("output.snapshots must be dyadic|all|none");
    if (!(c.grid.X > 0.0)) throw config_error("grid.X must be positive");
    if (c.grid.M < 2 || c.grid.M % 2 != 0) throw config_error("grid.M must be even and >= 2");
    if (c.time.N < 1)
        throw config_error("time.N must be >= 1 (dt = T/N would be undefined)");
    if (!(c.time.T > 0.0)) throw config_error("time.T must be positive");
    if (!(std::isfinite(c.dt()) && c.dt() > 0.0))
        throw config_error("inconsistent time section: dt = T/N is not a positive number");
    if (c.energy.stride < 1) throw config_error("energy.stride must be >= 1");
    return c;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string emit_config(const RunConfig& c) {
    std::ostringstream os;
    os << "kernel.family = " << c.kernel.family << '\n';
    os << "kernel.sigma = " << format_double(c.kernel.sigma) << '\n';
    os << "kernel.r = " << format_double(c.kernel.r) << '\n';
    if (!c.kernel.table_path.empty()) os << "kernel.table_path = " << c.kernel.table_path << '\n';
    os << "kernel.renormalize = " << (c.kernel.renormalize ? "true" : "false") << '\n';
    os << "reaction.family = " << c.reaction.family << '\n';
    os << "reaction.alpha = " << format_double(c.reaction.alpha) << '\n';
    if (!c.reaction.table_path.empty())
        os << "reaction.table_path = " << c.reaction.table_path << '\n';
    os << "grid.X = " << format_double(c.grid.X) << '\n';
    os << "grid.M = " << c.grid.M << '\n';
    os << "time.T = " << format_double(c.time.T) << '\n';
    os << "time.N = " << c.time.N << '\n';
    os << "init.L = " << format_double(c.init.L) << '\n';
    os << "output.dir = " << c.output.dir << '\n';
    os << "output.snapshots = " << c.output.snapshots << '\n';
    os << "output.precision = " << c.output.precision << '\n';
    os << "energy.stride = " << c.energy.stride << '\n';
    if (!c.sweep.pairs.empty()) {
        os << "sweep.pairs = ";
        for (std::size_t i = 0; i < c.sweep.pairs.size(); ++i) {
            if (i) os << ", ";
            os << format_double(c.sweep.pairs[i].first) << ':'
               << format_double(c.sweep.pairs[i].second);
        }
        os << '\n';
    }
    os << "seed = " << c.seed << '\n';
    return os.str();
}

std::vector<std::pair<double, double>> load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open table file " + path);
    std::vector<std::pair<double, double>> out;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string s = trim(line);
        if (s.empty()) continue;
        std::istringstream ls(s);
        double a, b;
        if (!(ls >> a >> b))
            throw io_error(path + " line " + std::to_string(lineno) +
                           ": expected two numeric columns");
        out.emplace_back(a, b);
    }
    return out;
}

} // namespace nrd

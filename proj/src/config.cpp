#include "seabed/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace seabed {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value)
{
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key +
                                    "' expects a number, got '" + value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value)
{
    try {
        size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key +
                                    "' expects an integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1")
        return true;
    if (value == "false" || value == "0")
        return false;
    throw std::invalid_argument("config: key '" + key +
                                "' expects true/false, got '" + value + "'");
}

void assign(ExperimentConfig& c, const std::string& key,
            const std::string& value)
{
    if (key == "model")
        c.model = value;
    else if (key == "mu")
        c.mu = parse_double(key, value);
    else if (key == "n")
        c.n = parse_int(key, value);
    else if (key == "dt")
        c.dt = parse_double(key, value);
    else if (key == "profile")
        c.profile = value;
    else if (key == "zeta_const")
        c.zeta_const = parse_double(key, value);
    else if (key == "amplitude")
        c.amplitude = parse_double(key, value);
    else if (key == "t_end")
        c.t_end = parse_double(key, value);
    else if (key == "record_every")
        c.record_every = parse_int(key, value);
    else if (key == "lambda")
        c.lambda = parse_double(key, value);
    else if (key == "nu")
        c.nu = parse_double(key, value);
    else if (key == "decay")
        c.decay = parse_double(key, value);
    else if (key == "margin")
        c.margin = parse_double(key, value);
    else if (key == "snapshot_count")
        c.snapshot_count = parse_int(key, value);
    else if (key == "epsilon")
        c.epsilon = parse_double(key, value);
    else if (key == "zeta_guess")
        c.zeta_guess = parse_double(key, value);
    else if (key == "threshold")
        c.threshold = parse_double(key, value);
    else if (key == "allow_large_epsilon")
        c.allow_large_epsilon = parse_bool(key, value);
    else if (key == "eigen_m")
        c.eigen_m = value;
    else if (key == "eigen_amplitude")
        c.eigen_amplitude = parse_double(key, value);
    else if (key == "stream")
        c.stream = value;
    else if (key == "snapshots")
        c.snapshots = value;
    else
        throw std::invalid_argument("config: unknown key '" + key + "'");
}

} // namespace

ModelSpec ExperimentConfig::model_spec() const
{
    if (model == "boussinesq" || model == "regularised-boussinesq")
        return ModelSpec::boussinesq(mu);
    if (model == "boussinesq-whitham" ||
        model == "regularised-boussinesq-whitham" || model == "whitham")
        return ModelSpec::whitham(mu);
    throw std::invalid_argument("config: unknown model '" + model +
                                "' (expected boussinesq or boussinesq-whitham)");
}

ProfileKind ExperimentConfig::profile_kind() const
{
    if (profile == "profile1")
        return Profile1{};
    if (profile == "profile2")
        return Profile2{};
    if (profile == "constant")
        return ConstantProfile{zeta_const};
    throw std::invalid_argument("config: unknown profile '" + profile +
                                "' (expected profile1, profile2 or constant)");
}

std::vector<int> ExperimentConfig::eigen_m_list() const
{
    std::vector<int> out;
    std::stringstream ss(eigen_m);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            continue;
        out.push_back(parse_int("eigen_m", item));
    }
    if (out.empty())
        throw std::invalid_argument("config: eigen_m lists no values");
    for (int m : out)
        if (m < 1)
            throw std::invalid_argument("config: eigen_m entries must be >= 1");
    return out;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("config: cannot open " + path.string());
    ExperimentConfig config;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find('#');
        if (comment != std::string::npos)
            line = line.substr(0, comment);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not of the form key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " has an empty key or value");
        assign(config, key, value);
    }
    return config;
}

void apply_override(ExperimentConfig& config, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("override '" + assignment +
                                    "' is not of the form key=value");
    const std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    if (key.empty() || value.empty())
        throw std::invalid_argument("override '" + assignment +
                                    "' has an empty key or value");
    assign(config, key, value);
}

void validate(const ExperimentConfig& config)
{
    (void)config.model_spec();   // throws on bad model/mu
    (void)config.profile_kind(); // throws on bad profile name
    if (config.n < 8 || config.n % 2 != 0)
        throw std::invalid_argument("config: n must be even and >= 8");
    if (!(config.dt > 0.0))
        throw std::invalid_argument("config: dt must be positive");
    if (!(config.t_end >= 0.0))
        throw std::invalid_argument("config: t_end must be nonnegative");
    if (config.record_every < 1)
        throw std::invalid_argument("config: record_every must be >= 1");
    if (!(config.amplitude > 0.0))
        throw std::invalid_argument("config: amplitude must be positive");
    if (config.profile == "constant" && !(1.0 + config.zeta_const > 0.0))
        throw std::invalid_argument(
            "config: zeta_const violates the no-island condition (needs "
            "zeta_const > -1)");
    if (config.lambda.has_value() != config.nu.has_value())
        throw std::invalid_argument(
            "config: lambda and nu must be given together");
    if (config.lambda && !(*config.lambda > 0.0))
        throw std::invalid_argument("config: lambda must be positive");
    if (config.nu && !(1.0 + *config.nu > 0.0))
        throw std::invalid_argument("config: 1 + nu must be positive");
    if (config.decay && !(*config.decay > 0.0))
        throw std::invalid_argument("config: decay must be positive");
    if (!(config.margin > 0.0))
        throw std::invalid_argument("config: margin must be positive");
    if (config.snapshot_count < 1)
        throw std::invalid_argument("config: snapshot_count must be >= 1");
    if (!(config.threshold > 0.0) || !(config.threshold < 1.0))
        throw std::invalid_argument("config: threshold must lie in (0, 1)");
    if (!(1.0 + config.zeta_guess > 0.0))
        throw std::invalid_argument("config: zeta_guess violates no-island");
}

} // namespace seabed

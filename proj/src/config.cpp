#include "co3/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace co3 {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

struct Line {
    int no;
    std::string section;  // e.g. "task", "run", "scheme <name>"
    std::string key;
    std::string value;
};

double parse_double(const Line& ln, const std::string& file) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(ln.value, &pos);
        if (pos != ln.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError(file, ln.no, "key '" + ln.key + "': not a number: '" + ln.value + "'");
    }
}

long parse_int(const Line& ln, const std::string& file) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(ln.value, &pos);
        if (pos != ln.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError(file, ln.no, "key '" + ln.key + "': not an integer: '" + ln.value + "'");
    }
}

FpFormat parse_format(const Line& ln, const std::string& file) {
    if (ln.value == "fp4") return FpFormat::fp4();
    if (ln.value == "fp8") return FpFormat::fp8();
    // Custom "e<exp>m<mant>" spellings, e.g. e3m2.
    if (ln.value.size() >= 4 && ln.value[0] == 'e') {
        const auto mpos = ln.value.find('m');
        if (mpos != std::string::npos) {
            try {
                FpFormat f;
                f.exp_bits = std::stoi(ln.value.substr(1, mpos - 1));
                f.mant_bits = std::stoi(ln.value.substr(mpos + 1));
                f.validate();
                return f;
            } catch (...) {
            }
        }
    }
    throw ConfigError(file, ln.no, "key 'format': expected fp4, fp8 or e<N>m<M>, got '" +
                                       ln.value + "'");
}

}  // namespace

ExperimentConfig parse_experiment_config_text(const std::string& text, const std::string& name) {
    std::vector<Line> lines;
    {
        std::istringstream in(text);
        std::string raw;
        std::string section;
        int no = 0;
        while (std::getline(in, raw)) {
            ++no;
            const auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            const std::string s = trim(raw);
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']') throw ConfigError(name, no, "unterminated section header");
                section = trim(s.substr(1, s.size() - 2));
                if (section.empty()) throw ConfigError(name, no, "empty section name");
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError(name, no, "expected key = value");
            if (section.empty()) throw ConfigError(name, no, "key before any [section]");
            lines.push_back({no, section, trim(s.substr(0, eq)), trim(s.substr(eq + 1))});
        }
    }

    ExperimentConfig config;
    SchemeConfig run_defaults;

    // [task] and [run] first, in file order.
    for (const Line& ln : lines) {
        if (ln.section == "task") {
            TaskSpec& t = config.task;
            if (ln.key == "kind") {
                if (ln.value == "quadratic") t.kind = TaskKind::Quadratic;
                else if (ln.value == "logistic") t.kind = TaskKind::LogisticRegression;
                else if (ln.value == "teacher_student") t.kind = TaskKind::TeacherStudentMLP;
                else throw ConfigError(name, ln.no, "key 'kind': unknown task '" + ln.value + "'");
            } else if (ln.key == "dimension") t.dimension = static_cast<int>(parse_int(ln, name));
            else if (ln.key == "users") t.users = static_cast<int>(parse_int(ln, name));
            else if (ln.key == "data_seed") t.data_seed = static_cast<std::uint64_t>(parse_int(ln, name));
            else if (ln.key == "noise_scale") t.noise_scale = parse_double(ln, name);
            else if (ln.key == "noise_shape") t.noise_shape = parse_double(ln, name);
            else if (ln.key == "eig_min") t.eig_min = parse_double(ln, name);
            else if (ln.key == "eig_max") t.eig_max = parse_double(ln, name);
            else if (ln.key == "init_distance") t.init_distance = parse_double(ln, name);
            else if (ln.key == "samples_per_user") t.samples_per_user = static_cast<int>(parse_int(ln, name));
            else if (ln.key == "batch") t.batch = static_cast<int>(parse_int(ln, name));
            else if (ln.key == "l2_reg") t.l2_reg = parse_double(ln, name);
            else if (ln.key == "inputs") t.inputs = static_cast<int>(parse_int(ln, name));
            else if (ln.key == "hidden") t.hidden = static_cast<int>(parse_int(ln, name));
            else if (ln.key == "outputs") t.outputs = static_cast<int>(parse_int(ln, name));
            else if (ln.key == "grad_bound") t.grad_bound = parse_double(ln, name);
            else throw ConfigError(name, ln.no, "unknown [task] key '" + ln.key + "'");
        }
    }

    auto apply_scheme_key = [&](SchemeConfig& s, const Line& ln) {
        if (ln.key == "scheme") {
            if (ln.value == "co3") s.scheme = Scheme::CO3;
            else if (ln.value == "uncompressed") s.scheme = Scheme::Uncompressed;
            else if (ln.value == "topk") s.scheme = Scheme::TopK;
            else if (ln.value == "fponly") s.scheme = Scheme::FpOnly;
            else
                throw ConfigError(name, ln.no,
                                  "key 'scheme': unknown scheme '" + ln.value + "'");
        } else if (ln.key == "format") s.format = parse_format(ln, name);
        else if (ln.key == "bias") {
            if (ln.value == "fitted") s.bias_policy = BiasPolicy::Fitted;
            else if (ln.value.rfind("fixed:", 0) == 0) {
                s.bias_policy = BiasPolicy::Fixed;
                try {
                    s.format.bias = std::stod(ln.value.substr(6));
                } catch (...) {
                    throw ConfigError(name, ln.no, "key 'bias': bad fixed value");
                }
            } else
                throw ConfigError(name, ln.no,
                                  "key 'bias': expected fitted or fixed:<value>");
        } else if (ln.key == "gamma") s.gamma = parse_double(ln, name);
        else if (ln.key == "refit_interval") s.refit_interval = static_cast<int>(parse_int(ln, name));
        else if (ln.key == "topk_fraction") s.topk_fraction = parse_double(ln, name);
        else if (ln.key == "eta") s.eta = parse_double(ln, name);
        else if (ln.key == "rounds") s.rounds = static_cast<int>(parse_int(ln, name));
        else if (ln.key == "seed") s.seed = static_cast<std::uint64_t>(parse_int(ln, name));
        else if (ln.key == "mc_bias_samples") s.mc_bias_samples = parse_int(ln, name);
        else throw ConfigError(name, ln.no, "unknown scheme key '" + ln.key + "'");
    };

    for (const Line& ln : lines)
        if (ln.section == "run") apply_scheme_key(run_defaults, ln);

    // Scheme sections, in file order.
    std::vector<std::string> seen;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& sec = lines[i].section;
        if (sec.rfind("scheme", 0) != 0) {
            if (sec != "task" && sec != "run")
                throw ConfigError(name, lines[i].no, "unknown section [" + sec + "]");
            continue;
        }
        const std::string sname = trim(sec.substr(6));
        if (sname.empty())
            throw ConfigError(name, lines[i].no, "scheme section needs a name: [scheme <name>]");
        if (std::find(seen.begin(), seen.end(), sname) != seen.end()) continue;
        seen.push_back(sname);
        SchemeConfig s = run_defaults;
        s.name = sname;
        for (const Line& ln : lines)
            if (ln.section == sec) apply_scheme_key(s, ln);
        s.users = config.task.users;
        s.validate();
        config.schemes.push_back(std::move(s));
    }
    if (config.schemes.empty())
        throw ConfigError(name, 1, "no [scheme <name>] section found");
    return config;
}

ExperimentConfig parse_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_experiment_config_text(ss.str(), path);
}

}  // namespace co3

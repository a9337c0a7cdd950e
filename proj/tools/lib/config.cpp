#include "config.hpp"

#include <fstream>
#include <sstream>

namespace codazzi::cli {

namespace {

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

double parse_number(const std::string& s, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": expected a number, got '" + s + "'");
    }
}

struct Entry {
    std::string key, value;
    int line;
};
using Sections = std::vector<std::pair<std::string, std::vector<Entry>>>;

Sections read_sections(const std::string& text) {
    Sections sections;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    std::string current;
    while (std::getline(is, raw)) {
        ++line;
        std::string s = raw;
        if (const auto hash = s.find_first_of("#;"); hash != std::string::npos) s.resize(hash);
        const auto beg = s.find_first_not_of(" \t\r");
        if (beg == std::string::npos) continue;
        const auto end = s.find_last_not_of(" \t\r");
        s = s.substr(beg, end - beg + 1);

        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError("line " + std::to_string(line) + ": unterminated section header");
            current = s.substr(1, s.size() - 2);
            sections.emplace_back(current, std::vector<Entry>{});
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
        if (current.empty())
            throw ConfigError("line " + std::to_string(line) + ": entry outside any [section]");
        std::string key = s.substr(0, eq);
        std::string value = s.substr(eq + 1);
        const auto kend = key.find_last_not_of(" \t");
        key = key.substr(0, kend == std::string::npos ? 0 : kend + 1);
        const auto vbeg = value.find_first_not_of(" \t");
        value = vbeg == std::string::npos ? "" : value.substr(vbeg);
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line) + ": empty key or value");
        sections.back().second.push_back(Entry{key, value, line});
    }
    return sections;
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    const Sections sections = read_sections(text);

    for (const auto& [section, entries] : sections) {
        if (section == "metric") {
            for (const auto& e : entries) {
                if (e.key == "example") cfg.example_id = e.value;
                else if (e.key == "lambda") cfg.lambda = parse_number(e.value, e.line);
                else if (e.key == "mu") cfg.mu_text = e.value;
                else if (e.key.rfind("g_", 0) == 0) cfg.raw_g[e.key.substr(2)] = e.value;
                else if (e.key.rfind("a_", 0) == 0) cfg.raw_a[e.key.substr(2)] = e.value;
                else throw ConfigError("line " + std::to_string(e.line) + ": unknown metric key '" +
                                       e.key + "'");
            }
        } else if (section == "chart") {
            Chart chart;
            // coords first, then one axis line per coordinate
            for (const auto& e : entries)
                if (e.key == "coords") chart.coords = split_ws(e.value);
            if (chart.coords.empty())
                throw ConfigError("[chart] needs 'coords = name name ...' before axis lines");
            chart.domain.resize(chart.coords.size());
            chart.periodic.assign(chart.coords.size(), false);
            std::vector<bool> seen(chart.coords.size(), false);
            for (const auto& e : entries) {
                if (e.key == "coords") continue;
                auto it = std::find(chart.coords.begin(), chart.coords.end(), e.key);
                if (it == chart.coords.end())
                    throw ConfigError("line " + std::to_string(e.line) +
                                      ": axis '" + e.key + "' is not in coords");
                const auto i = static_cast<std::size_t>(it - chart.coords.begin());
                const auto toks = split_ws(e.value);
                if (toks.size() != 2 && !(toks.size() == 3 && toks[2] == "periodic"))
                    throw ConfigError("line " + std::to_string(e.line) +
                                      ": axis needs 'lo hi [periodic]'");
                chart.domain[i] = {parse_number(toks[0], e.line), parse_number(toks[1], e.line)};
                chart.periodic[i] = toks.size() == 3;
                seen[i] = true;
            }
            for (std::size_t i = 0; i < seen.size(); ++i)
                if (!seen[i])
                    throw ConfigError("[chart] is missing the axis line for '" + chart.coords[i] +
                                      "'");
            cfg.chart = std::move(chart);
        } else if (section == "grid") {
            GridSpec gs;
            for (const auto& e : entries) {
                if (e.key == "counts") {
                    for (const auto& t : split_ws(e.value))
                        gs.counts.push_back(static_cast<int>(parse_number(t, e.line)));
                } else if (e.key == "margin") {
                    gs.margin = parse_number(e.value, e.line);
                } else {
                    throw ConfigError("line " + std::to_string(e.line) + ": unknown grid key '" +
                                      e.key + "'");
                }
            }
            cfg.grid = std::move(gs);
        } else if (section == "probe") {
            for (const auto& e : entries) {
                if (e.key != "point")
                    throw ConfigError("line " + std::to_string(e.line) + ": unknown probe key");
                const auto toks = split_ws(e.value);
                Point p(static_cast<int>(toks.size()));
                for (std::size_t i = 0; i < toks.size(); ++i)
                    p[static_cast<int>(i)] = parse_number(toks[i], e.line);
                cfg.probe = std::move(p);
            }
        } else if (section == "tolerances") {
            for (const auto& e : entries) cfg.tol.set_by_name(e.key, parse_number(e.value, e.line));
        } else if (section == "characteristics") {
            for (const auto& e : entries) {
                if (e.key == "a") cfg.char_a = parse_number(e.value, e.line);
                else if (e.key == "b") cfg.char_b = parse_number(e.value, e.line);
                else if (e.key == "c") cfg.char_c = parse_number(e.value, e.line);
                else throw ConfigError("line " + std::to_string(e.line) +
                                       ": unknown characteristics key '" + e.key + "'");
            }
        } else if (section == "run") {
            for (const auto& e : entries) {
                if (e.key == "seed") cfg.seed = static_cast<unsigned>(parse_number(e.value, e.line));
                else if (e.key == "format") cfg.format = e.value;
                else if (e.key == "out") cfg.out_dir = e.value;
                else throw ConfigError("line " + std::to_string(e.line) + ": unknown run key '" +
                                       e.key + "'");
            }
        } else {
            throw ConfigError("unknown section [" + section + "]");
        }
    }

    const int n_sources = (cfg.example_id ? 1 : 0) +
                          ((cfg.lambda || cfg.mu_text) ? 1 : 0) +
                          ((!cfg.raw_g.empty() || !cfg.raw_a.empty()) ? 1 : 0);
    if (n_sources != 1)
        throw ConfigError("config must declare exactly one metric source "
                          "(example, lambda+mu, or raw g_*/a_* entries)");
    if ((cfg.lambda.has_value()) != (cfg.mu_text.has_value()))
        throw ConfigError("inline family needs both 'lambda' and 'mu'");
    if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "both")
        throw ConfigError("format must be json, csv, or both");
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

ResolvedRun resolve(const RunConfig& cfg) {
    ResolvedRun run;

    if (cfg.example_id) {
        NamedExample ex = named_example(*cfg.example_id);
        run.source_id = ex.id;
        run.g = std::move(ex.g);
        run.A = std::move(ex.A);
        run.grid_spec = cfg.grid.value_or(ex.default_grid);
        run.probe = cfg.probe.value_or(ex.probe);
        run.family = std::move(ex.family);
    } else if (cfg.lambda) {
        if (!cfg.chart) throw ConfigError("inline family runs need a [chart] section");
        FamilyInstance fam = build_family(*cfg.lambda, parse(*cfg.mu_text, cfg.chart->coords),
                                          *cfg.chart, cfg.tol.collision);
        run.source_id = "inline";
        run.g = fam.g;
        run.A = fam.A;
        run.grid_spec = cfg.grid.value_or(GridSpec::uniform(7, cfg.chart->dim()));
        run.probe = cfg.probe.value_or(Point::Zero(cfg.chart->dim()));
        run.family = std::move(fam);
    } else {
        if (!cfg.chart) throw ConfigError("raw-component runs need a [chart] section");
        const Chart& chart = *cfg.chart;
        const int n = chart.dim();
        auto parse_entries = [&](const std::map<std::string, std::string>& entries,
                                 const char* what) {
            SymTensorField t = SymTensorField::zero(chart);
            for (const auto& [key, text] : entries) {
                // key "ci_cj" with coordinate names
                const auto us = key.find('_');
                if (us == std::string::npos)
                    throw ConfigError(std::string(what) + " key '" + key +
                                      "' must look like g_<ci>_<cj>");
                const std::string ci = key.substr(0, us), cj = key.substr(us + 1);
                int i = -1, j = -1;
                for (int k = 0; k < n; ++k) {
                    if (chart.coords[k] == ci) i = k;
                    if (chart.coords[k] == cj) j = k;
                }
                if (i < 0 || j < 0)
                    throw ConfigError(std::string(what) + " key '" + key +
                                      "' names unknown coordinates");
                t.set_entry(i, j, parse(text, chart.coords));
            }
            return t;
        };
        run.source_id = "inline";
        run.g = MetricField(parse_entries(cfg.raw_g, "metric"));
        run.A = parse_entries(cfg.raw_a, "tensor");
        run.grid_spec = cfg.grid.value_or(GridSpec::uniform(7, n));
        run.probe = cfg.probe.value_or(Point::Zero(n));
    }

    const int dim = run.g.dim();
    if (static_cast<int>(run.grid_spec.counts.size()) != dim)
        throw ConfigError("grid counts dimension does not match the chart");
    for (int c : run.grid_spec.counts)
        if (c < 5) throw ConfigError("grid needs at least 5 nodes per axis");
    if (run.probe.size() != dim) throw ConfigError("probe dimension does not match the chart");
    return run;
}

std::string export_config(const RunConfig& cfg) {
    const ResolvedRun run = resolve(cfg);
    const Chart& chart = run.g.chart();
    std::ostringstream os;

    os << "[metric]\n";
    if (run.family) {
        os << "lambda = " << format_double(run.family->lambda) << "\n";
        os << "mu = " << run.family->mu.to_string() << "\n";
    } else {
        for (int i = 0; i < chart.dim(); ++i)
            for (int j = i; j < chart.dim(); ++j) {
                os << "g_" << chart.coords[i] << '_' << chart.coords[j] << " = "
                   << run.g.tensor().entry(i, j).to_string() << "\n";
            }
        for (int i = 0; i < chart.dim(); ++i)
            for (int j = i; j < chart.dim(); ++j) {
                os << "a_" << chart.coords[i] << '_' << chart.coords[j] << " = "
                   << run.A.entry(i, j).to_string() << "\n";
            }
    }

    os << "\n[chart]\ncoords =";
    for (const auto& c : chart.coords) os << ' ' << c;
    os << "\n";
    for (int i = 0; i < chart.dim(); ++i) {
        os << chart.coords[i] << " = " << format_double(chart.domain[i].lo) << ' '
           << format_double(chart.domain[i].hi);
        if (chart.periodic[i]) os << " periodic";
        os << "\n";
    }

    os << "\n[grid]\ncounts =";
    for (int c : run.grid_spec.counts) os << ' ' << c;
    os << "\n";
    if (run.grid_spec.margin != 0.0) os << "margin = " << format_double(run.grid_spec.margin) << "\n";

    os << "\n[probe]\npoint =";
    for (int i = 0; i < run.probe.size(); ++i) os << ' ' << format_double(run.probe[i]);
    os << "\n";

    os << "\n[tolerances]\n";
    for (const auto& name : Tolerances::names())
        os << name << " = " << format_double(cfg.tol.by_name(name)) << "\n";

    if (cfg.char_a || cfg.char_b || cfg.char_c) {
        os << "\n[characteristics]\n";
        if (cfg.char_a) os << "a = " << format_double(*cfg.char_a) << "\n";
        if (cfg.char_b) os << "b = " << format_double(*cfg.char_b) << "\n";
        if (cfg.char_c) os << "c = " << format_double(*cfg.char_c) << "\n";
    }

    os << "\n[run]\nseed = " << cfg.seed << "\nformat = " << cfg.format << "\n";
    if (!cfg.out_dir.empty()) os << "out = " << cfg.out_dir << "\n";
    return os.str();
}

} // namespace codazzi::cli

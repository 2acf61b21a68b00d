#include "qmaxent/io.hpp"

#include "qmaxent/version.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qmaxent::io {
namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> number_array(const json& j, const std::string& what) {
    if (!j.is_array()) throw ParseError(what + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) throw ParseError(what + " has a non-numeric entry");
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace

json load_json_file(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
}

ProbabilityDistribution read_distribution(const json& j) {
    if (!j.contains("probs")) throw ParseError("missing field \"probs\"");
    try {
        return ProbabilityDistribution(number_array(j["probs"], "\"probs\""));
    } catch (const InvalidDistribution& e) {
        throw ParseError(std::string("\"probs\": ") + e.what());
    }
}

JointDistribution read_joint(const json& j) {
    if (!j.contains("probs") || !j["probs"].is_array() || j["probs"].empty() ||
        !j["probs"].front().is_array())
        throw ParseError("joint input needs \"probs\" as an array of rows");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < j["probs"].size(); ++i)
        rows.push_back(number_array(j["probs"][i], "row " + std::to_string(i)));
    try {
        return JointDistribution(rows);
    } catch (const InvalidDistribution& e) {
        throw ParseError(std::string("\"probs\": ") + e.what());
    }
}

ConstraintSet read_constraints(const json& j) {
    ConstraintSet cs;
    if (!j.contains("states") || !j["states"].is_array() || j["states"].empty())
        throw ParseError("constraints need a non-empty \"states\" array");
    for (const auto& s : j["states"])
        cs.states.push_back(s.is_string() ? s.get<std::string>() : s.dump());
    if (j.contains("observables")) {
        if (!j["observables"].is_array())
            throw ParseError("\"observables\" must be an array of rows");
        for (std::size_t i = 0; i < j["observables"].size(); ++i)
            cs.observables.push_back(
                number_array(j["observables"][i], "observable " + std::to_string(i)));
    }
    if (j.contains("targets")) cs.targets = number_array(j["targets"], "\"targets\"");
    if (cs.observables.size() != cs.targets.size())
        throw ParseError("\"observables\" and \"targets\" must have equal length");
    return cs;
}

SampleSet read_samples(const std::string& path, std::optional<ChainSpec> spec) {
    const std::string text = read_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ParseError("'" + path + "': " + e.what());
        }
        for (const char* key : {"n", "d", "samples"})
            if (!j.contains(key))
                throw ParseError("'" + path + "': missing field \"" + key + "\"");
        ChainSpec s(j["n"].get<int>(), j["d"].get<int>());
        std::vector<int> values;
        for (const auto& v : j["samples"]) {
            if (!v.is_number_integer())
                throw ParseError("'" + path + "': non-integer sample");
            values.push_back(v.get<int>());
        }
        return SampleSet(s, std::move(values));
    }

    if (!spec)
        throw ParseError("CSV samples need --n and --d for the chain spec");
    std::vector<int> values;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            std::size_t pos = 0;
            const int v = std::stoi(line, &pos);
            if (pos != line.size()) throw std::invalid_argument("trailing junk");
            values.push_back(v);
        } catch (const std::exception&) {
            throw ParseError("'" + path + "' line " + std::to_string(lineno) +
                             ": expected one integer, got '" + line + "'");
        }
    }
    return SampleSet(*spec, std::move(values));
}

ScalingSeries read_series_csv(const std::string& path) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("'" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "n,w")
        throw ParseError("'" + path + "' line 1: expected header \"n,w\"");
    std::vector<ScalingPoint> pts;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("'" + path + "' line " + std::to_string(lineno) +
                             ": expected \"n,w\"");
        try {
            pts.push_back({std::stol(line.substr(0, comma)),
                           std::stod(line.substr(comma + 1))});
        } catch (const std::exception&) {
            throw ParseError("'" + path + "' line " + std::to_string(lineno) +
                             ": malformed numbers");
        }
    }
    return ScalingSeries(std::move(pts));
}

void atomic_write(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const std::string tmp = path + ".tmp";
    std::error_code ec;
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp + "'");
        out << contents;
        if (!out.flush()) {
            out.close();
            fs::remove(tmp, ec);
            throw Error("short write to '" + tmp + "'");
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error("cannot rename '" + tmp + "' to '" + path + "'");
    }
}

std::string file_digest(const std::string& path) {
    const std::string data = read_file(path);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json RunManifest::to_json() const {
    json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["kernel"] = kernel;
    j["params"] = params;
    if (seed_used) {
        j["seed"] = seed;
        j["seed_source"] = seed_from_entropy ? "entropy" : "flag";
    }
    if (!degeneracy.empty()) j["degeneracy"] = degeneracy;
    j["inputs"] = input_digests;
    return j;
}

json gibbs_to_json(const GibbsDistribution& g) {
    json j;
    j["lambdas"] = g.lambdas;
    j["log_z"] = g.log_z;
    j["probs"] = g.probs.probs();
    j["residuals"] = g.residuals;
    j["iterations"] = g.iterations;
    return j;
}

json fit_to_json(const FitResult& f) {
    json j;
    j["q_star"] = f.q_star;
    j["psi_star"] = f.psi_star;
    j["log_likelihood"] = f.log_likelihood;
    j["converged"] = f.converged;
    j["degeneracy"] = f.degeneracy == DegeneracySource::exact ? "exact" : "asymptotic";
    j["inner_solves"] = json::array();
    for (const auto& s : f.inner_solves) {
        json r;
        r["q"] = s.q;
        if (s.interior) {
            r["psi"] = s.psi;
            r["log_likelihood"] = s.log_likelihood;
            r["matching_residual_abs"] = s.matching_residual_abs;
            r["matching_residual_rel"] = s.matching_residual_rel;
        } else {
            r["failed"] = s.note;
        }
        j["inner_solves"].push_back(std::move(r));
    }
    return j;
}

json verdict_to_json(const ScalingVerdict& v) {
    const auto model_name = [](GrowthModel m) {
        switch (m) {
            case GrowthModel::exponential: return "exponential";
            case GrowthModel::power_law: return "power-law";
            default: return "inconclusive";
        }
    };
    const auto rec_name = [](Recommendation r) {
        switch (r) {
            case Recommendation::shannon: return "shannon";
            case Recommendation::generalized_q: return "generalized-q";
            default: return "inspect";
        }
    };
    json j;
    j["model"] = model_name(v.model);
    j["recommendation"] = rec_name(v.recommendation);
    j["exponential_fit"] = {{"c0", v.exponential_fit.slope},
                            {"intercept", v.exponential_fit.intercept},
                            {"residual", v.exponential_fit.rss}};
    j["powerlaw_fit"] = {{"exponent", v.powerlaw_fit.slope},
                         {"intercept", v.powerlaw_fit.intercept},
                         {"residual", v.powerlaw_fit.rss}};
    j["superexponential_hint"] = v.superexponential_hint;
    j["sign_test_p"] = v.sign_test_p;
    j["report"] = recommend(v);
    return j;
}

std::string surface_to_csv(const LikelihoodSurface& s) {
    std::ostringstream os;
    os << "q,psi,delta\n";
    for (std::size_t i = 0; i < s.q_grid.size(); ++i)
        for (std::size_t j = 0; j < s.psi_grid.size(); ++j)
            os << fmt(s.q_grid[i]) << ',' << fmt(s.psi_grid[j]) << ','
               << fmt(s.deltas[i * s.psi_grid.size() + j]) << '\n';
    return os.str();
}

json surface_to_json(const LikelihoodSurface& s) {
    json j;
    j["q_grid"] = s.q_grid;
    j["psi_grid"] = s.psi_grid;
    j["deltas"] = json::array(); // row per q; null marks an out-of-support point
    for (std::size_t i = 0; i < s.q_grid.size(); ++i) {
        json row = json::array();
        for (std::size_t jj = 0; jj < s.psi_grid.size(); ++jj) {
            const double d = s.deltas[i * s.psi_grid.size() + jj];
            if (std::isinf(d))
                row.push_back(nullptr);
            else
                row.push_back(d);
        }
        j["deltas"].push_back(std::move(row));
    }
    j["ell_max"] = s.ell_max;
    j["q_at_max"] = s.q_at_max;
    j["psi_at_max"] = s.psi_at_max;
    return j;
}

} // namespace qmaxent::io

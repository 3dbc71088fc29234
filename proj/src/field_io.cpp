#include "kspap/field_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kspap/errors.hpp"

namespace kspap {

void write_grid_csv(const SpectralField& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path);
    out.precision(17);
    const auto vals = to_grid(f);
    // one line per run of the last axis
    const std::size_t per_row =
        f.domain().dim() == 1 ? vals.size() : static_cast<std::size_t>(f.domain().quad_points());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        out << vals[i];
        out << (((i + 1) % per_row == 0) ? '\n' : ',');
    }
}

SpectralField read_grid_csv(const BoxDomain& domain, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::vector<double> vals;
    vals.reserve(domain.grid_count());
    std::string line;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            if (!cell.empty()) vals.push_back(std::stod(cell));
    }
    if (vals.size() != domain.grid_count())
        throw SizeMismatch("read_grid_csv: value count does not match the domain grid");
    return to_coefficients(domain, vals);
}

namespace {

nlohmann::json domain_json(const BoxDomain& d) {
    nlohmann::json j;
    j["dim"] = d.dim();
    j["side_lengths"] = d.sides();
    j["modes"] = d.modes();
    j["quadrature_points"] = d.quad_points();
    return j;
}

BoxDomain domain_from_json(const nlohmann::json& j) {
    std::vector<double> sides = j.at("side_lengths").get<std::vector<double>>();
    const int modes = j.at("modes").get<int>();
    const int quad = j.value("quadrature_points", 0);
    return BoxDomain(std::move(sides), modes, quad);
}

}  // namespace

std::string field_to_json(const SpectralField& f) {
    nlohmann::json j = domain_json(f.domain());
    j["coefficients"] = f.coeffs();
    return j.dump();
}

std::string field_to_json(const VectorSpectralField& f) {
    nlohmann::json j = domain_json(f.domain());
    nlohmann::json comps = nlohmann::json::array();
    for (int k = 0; k < f.components(); ++k) comps.push_back(f.component(k));
    j["components"] = comps;
    return j.dump();
}

SpectralField field_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    BoxDomain d = domain_from_json(j);
    auto coeffs = j.at("coefficients").get<std::vector<double>>();
    return SpectralField(std::move(d), std::move(coeffs));
}

VectorSpectralField vector_field_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    BoxDomain d = domain_from_json(j);
    auto comps = j.at("components").get<std::vector<std::vector<double>>>();
    return VectorSpectralField(std::move(d), std::move(comps));
}

}  // namespace kspap

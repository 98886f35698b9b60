#include "heisflow/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace heis::io {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

double need_number(const json& j, const char* field, const std::string& where) {
    if (!j.contains(field) || !j[field].is_number())
        throw ParseError(where + ": missing or non-numeric field '" + field + "'");
    return j[field].get<double>();
}

Coords to_coords(const json& arr, size_t expect, const std::string& where) {
    if (!arr.is_array() || arr.size() != expect)
        throw ParseError(where + ": expected array of " + std::to_string(expect) + " numbers");
    Coords c;
    c.reserve(expect);
    for (const auto& v : arr) {
        if (!v.is_number()) throw ParseError(where + ": non-numeric entry");
        c.push_back(v.get<double>());
    }
    return c;
}

void write_coords(std::ostream& os, const Coords& c) {
    os << '[';
    for (size_t i = 0; i < c.size(); ++i) {
        if (i) os << ',';
        os << fmt17(c[i]);
    }
    os << ']';
}

}  // namespace

DiscreteCharge read_charge_json(const std::string& path, std::vector<DivergenceAtom>* div_out) {
    const json j = load_file(path);
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw ParseError(path + ": missing integer field 'n'");
    const int n = j["n"].get<int>();
    if (n < 1 || n > 8) throw ParseError(path + ": group index n out of range");
    std::vector<ChargeAtom> atoms;
    if (!j.contains("atoms") || !j["atoms"].is_array())
        throw ParseError(path + ": missing array field 'atoms'");
    size_t idx = 0;
    for (const auto& a : j["atoms"]) {
        const std::string where = path + ": atoms[" + std::to_string(idx++) + "]";
        if (!a.contains("point") || !a.contains("vector"))
            throw ParseError(where + ": needs 'point' and 'vector'");
        ChargeAtom atom{HPoint(n, to_coords(a["point"], static_cast<size_t>(2 * n + 1), where)),
                        HVector(n, to_coords(a["vector"], static_cast<size_t>(2 * n), where))};
        atoms.push_back(std::move(atom));
    }
    if (div_out) {
        div_out->clear();
        if (j.contains("divergence")) {
            size_t k = 0;
            for (const auto& d : j["divergence"]) {
                const std::string where = path + ": divergence[" + std::to_string(k++) + "]";
                if (!d.contains("point") || !d.contains("mass"))
                    throw ParseError(where + ": needs 'point' and 'mass'");
                div_out->push_back(
                    {HPoint(n, to_coords(d["point"], static_cast<size_t>(2 * n + 1), where)),
                     need_number(d, "mass", where)});
            }
        }
    }
    return DiscreteCharge::make(n, std::move(atoms));
}

namespace {
HorizontalCurve curve_from_json(const json& jc, const std::string& where) {
    HorizontalCurve c;
    c.l = need_number(jc, "l", where);
    if (!jc.contains("samples") || !jc["samples"].is_array() || jc["samples"].empty())
        throw ParseError(where + ": missing 'samples'");
    const size_t d = jc["samples"][0].size();
    if (d < 3 || d % 2 == 0) throw ParseError(where + ": sample length must be 2n+1");
    const int n = static_cast<int>((d - 1) / 2);
    c.n = n;
    for (const auto& s : jc["samples"]) c.samples.emplace_back(n, to_coords(s, d, where));
    if (!jc.contains("velocities") || jc["velocities"].size() != c.samples.size())
        throw ParseError(where + ": 'velocities' must match samples");
    for (const auto& v : jc["velocities"])
        c.velocities.emplace_back(n, to_coords(v, static_cast<size_t>(2 * n), where));
    c.dt = c.samples.size() > 1 ? c.l / static_cast<double>(c.samples.size() - 1) : 0.0;
    return c;
}
}  // namespace

CurveMeasure read_measure_json(const std::string& path) {
    const json j = load_file(path);
    CurveMeasure m;
    m.l = need_number(j, "l", path);
    if (!j.contains("entries") || !j["entries"].is_array())
        throw ParseError(path + ": missing array field 'entries'");
    size_t idx = 0;
    for (const auto& e : j["entries"]) {
        const std::string where = path + ": entries[" + std::to_string(idx++) + "]";
        if (!e.contains("curve")) throw ParseError(where + ": needs 'curve'");
        WeightedCurve wc{need_number(e, "weight", where), curve_from_json(e["curve"], where)};
        m.entries.push_back(std::move(wc));
    }
    m.n = m.entries.empty() ? 1 : m.entries.front().curve.n;
    for (const auto& e : m.entries)
        if (e.curve.n != m.n) throw ParseError(path + ": mixed group index across curves");
    return m;
}

RunConfig read_config_json(const std::string& path) {
    const json j = load_file(path);
    RunConfig c;
    auto opt_num = [&](const char* k, double dflt) {
        return j.contains(k) ? need_number(j, k, path) : dflt;
    };
    c.n = static_cast<int>(opt_num("n", 0));
    c.l = opt_num("l", c.l);
    c.eps = opt_num("epsilon", c.eps);
    c.grid = opt_num("grid", c.grid);
    c.dt = opt_num("dt", c.dt);
    c.transverse_points = static_cast<int>(opt_num("transverse_points", c.transverse_points));
    c.threads = static_cast<int>(opt_num("threads", c.threads));
    c.jitter_seed = static_cast<uint64_t>(opt_num("jitter_seed", 0));
    c.segment_dx = opt_num("segment_dx", c.segment_dx);
    c.div_extraction_grid = opt_num("divergence_extraction_grid", c.div_extraction_grid);
    c.t_max = opt_num("t_max", 0);
    if (j.contains("epsilon_schedule")) {
        for (const auto& v : j["epsilon_schedule"]) c.eps_schedule.push_back(v.get<double>());
    }
    if (j.contains("thresholds")) {
        const json& t = j["thresholds"];
        auto th = [&](const char* k, double dflt) {
            return t.contains(k) ? need_number(t, k, path) : dflt;
        };
        c.th.solenoidal_tol = th("solenoidal_tol", c.th.solenoidal_tol);
        c.th.division = th("division", c.th.division);
        c.th.vertical_speed = th("vertical_speed", c.th.vertical_speed);
        c.th.plane_contact_band = th("plane_contact_band", c.th.plane_contact_band);
        c.th.pairing_rel = th("pairing_rel", c.th.pairing_rel);
        c.th.variation_rel = th("variation_rel", c.th.variation_rel);
        c.th.support_fraction = th("support_fraction", c.th.support_fraction);
        c.th.mass_rel = th("mass_rel", c.th.mass_rel);
        c.th.contact = th("contact", c.th.contact);
    }
    if (!(c.l > 0) || !(c.eps > 0) || !(c.grid > 0) || !(c.dt > 0))
        throw ParseError(path + ": l, epsilon, grid, dt must be positive");
    if (c.dt > c.l + 1e-15) throw ParseError(path + ": dt must not exceed l");
    return c;
}

std::vector<HPoint> read_points_json(const std::string& path, int n) {
    const json j = load_file(path);
    if (!j.is_array()) throw ParseError(path + ": expected a JSON array of points");
    std::vector<HPoint> out;
    size_t idx = 0;
    for (const auto& p : j) {
        const std::string where = path + ": [" + std::to_string(idx++) + "]";
        out.emplace_back(n, to_coords(p, static_cast<size_t>(2 * n + 1), where));
    }
    return out;
}

std::optional<HPoint> parse_point_or_infinity(const std::string& text, int n) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("point: ") + e.what());
    }
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return std::nullopt;
        throw ParseError("point: unknown sentinel '" + j.get<std::string>() + "'");
    }
    return HPoint(n, to_coords(j, static_cast<size_t>(2 * n + 1), "point"));
}

std::string point_or_infinity_to_json(const std::optional<HPoint>& p) {
    if (!p) return "\"inf\"";
    std::ostringstream os;
    write_coords(os, p->c);
    return os.str();
}

void write_charge_json(std::ostream& os, const DiscreteCharge& mu,
                       const std::vector<DivergenceAtom>* divergence) {
    os << "{\"n\":" << mu.n << ",\"atoms\":[";
    for (size_t i = 0; i < mu.atoms.size(); ++i) {
        if (i) os << ',';
        os << "{\"point\":";
        write_coords(os, mu.atoms[i].p.c);
        os << ",\"vector\":";
        write_coords(os, mu.atoms[i].v.c);
        os << '}';
    }
    os << ']';
    if (divergence && !divergence->empty()) {
        os << ",\"divergence\":[";
        for (size_t i = 0; i < divergence->size(); ++i) {
            if (i) os << ',';
            os << "{\"point\":";
            write_coords(os, (*divergence)[i].p.c);
            os << ",\"mass\":" << fmt17((*divergence)[i].mass) << '}';
        }
        os << ']';
    }
    os << "}\n";
}

void write_curve_json(std::ostream& os, const HorizontalCurve& c) {
    os << "{\"l\":" << fmt17(c.l) << ",\"samples\":[";
    for (size_t i = 0; i < c.samples.size(); ++i) {
        if (i) os << ',';
        write_coords(os, c.samples[i].c);
    }
    os << "],\"velocities\":[";
    for (size_t i = 0; i < c.velocities.size(); ++i) {
        if (i) os << ',';
        write_coords(os, c.velocities[i].c);
    }
    os << "]}";
}

void write_config_json(std::ostream& os, const RunConfig& c) {
    os << "{\"n\":" << c.n << ",\"l\":" << fmt17(c.l) << ",\"epsilon\":" << fmt17(c.eps);
    if (!c.eps_schedule.empty()) {
        os << ",\"epsilon_schedule\":[";
        for (size_t i = 0; i < c.eps_schedule.size(); ++i) {
            if (i) os << ',';
            os << fmt17(c.eps_schedule[i]);
        }
        os << ']';
    }
    os << ",\"grid\":" << fmt17(c.grid) << ",\"dt\":" << fmt17(c.dt)
       << ",\"transverse_points\":" << c.transverse_points << ",\"threads\":" << c.threads
       << ",\"jitter_seed\":" << c.jitter_seed << ",\"segment_dx\":" << fmt17(c.segment_dx)
       << ",\"divergence_extraction_grid\":" << fmt17(c.div_extraction_grid)
       << ",\"t_max\":" << fmt17(c.t_max) << ",\"thresholds\":{"
       << "\"solenoidal_tol\":" << fmt17(c.th.solenoidal_tol)
       << ",\"division\":" << fmt17(c.th.division)
       << ",\"vertical_speed\":" << fmt17(c.th.vertical_speed)
       << ",\"plane_contact_band\":" << fmt17(c.th.plane_contact_band)
       << ",\"pairing_rel\":" << fmt17(c.th.pairing_rel)
       << ",\"variation_rel\":" << fmt17(c.th.variation_rel)
       << ",\"support_fraction\":" << fmt17(c.th.support_fraction)
       << ",\"mass_rel\":" << fmt17(c.th.mass_rel) << ",\"contact\":" << fmt17(c.th.contact)
       << "}}\n";
}

MeasureWriter::MeasureWriter(std::ostream& os, double l) : os_(os) {
    os_ << "{\"l\":" << fmt17(l) << ",\"entries\":[";
}

void MeasureWriter::entry(double weight, const HorizontalCurve& c) {
    if (!first_) os_ << ',';
    first_ = false;
    os_ << "{\"weight\":" << fmt17(weight) << ",\"curve\":";
    write_curve_json(os_, c);
    os_ << '}';
}

void MeasureWriter::close() {
    if (closed_) return;
    os_ << "]}\n";
    closed_ = true;
}

void write_trajectory_csv_header(std::ostream& os, int n, bool curve_column) {
    if (curve_column) os << "curve,weight,";
    os << 't';
    for (int i = 1; i <= n; ++i) os << ",x" << i;
    for (int i = 1; i <= n; ++i) os << ",y" << i;
    os << ",z\n";
}

void write_trajectory_csv_rows(std::ostream& os, const HorizontalCurve& c,
                               std::optional<CsvCurveTag> tag) {
    for (size_t k = 0; k < c.samples.size(); ++k) {
        if (tag) os << tag->id << ',' << fmt17(tag->weight) << ',';
        os << fmt17(static_cast<double>(k) * c.dt);
        for (size_t i = 0; i < c.samples[k].c.size(); ++i) os << ',' << fmt17(c.samples[k].c[i]);
        os << '\n';
    }
}

namespace {
void write_check(std::ostream& os, const char* name, double value, double tol, bool pass,
                 bool first = false) {
    if (!first) os << ',';
    os << '"' << name << "\":{\"value\":" << fmt17(value) << ",\"tol\":" << fmt17(tol)
       << ",\"pass\":" << (pass ? "true" : "false") << '}';
}
}  // namespace

void write_report_json(std::ostream& os, const ReportInputs& in) {
    const VerifyReport& v = in.verify;
    os << "{\"pipeline\":\"" << in.pipeline << "\",\"dictionary\":\"fields v1\",\"checks\":{";
    write_check(os, "mass_identity", v.mass_identity_rel_err, in.tol.mass_rel, v.pass_mass, true);
    write_check(os, "weak_reconstruction", v.pairing_max_rel, in.tol.pairing_rel, v.pass_pairing);
    write_check(os, "variation_identity", v.variation_rel_err, in.tol.variation_rel,
                v.pass_variation);
    write_check(os, "support_confinement", v.support_outlier_sample_fraction,
                in.tol.support_fraction, v.pass_support);
    os << "},\"pairings\":[";
    for (size_t k = 0; k < v.nu_pairings.size(); ++k) {
        if (k) os << ',';
        os << "{\"field\":\"" << v.field_names[k] << "\",\"target\":" << fmt17(v.target_pairings[k])
           << ",\"nu\":" << fmt17(v.nu_pairings[k]) << '}';
    }
    os << "],\"length_stats\":{\"mean\":" << fmt17(v.length_mean)
       << ",\"min\":" << fmt17(v.length_min) << ",\"max\":" << fmt17(v.length_max)
       << ",\"horizon\":" << fmt17(v.horizon) << '}' << ",\"curve_count\":" << v.curve_count
       << ",\"total_weight\":" << fmt17(v.total_weight) << ",\"var_mu\":" << fmt17(in.var_mu)
       << ",\"var_estimate\":" << fmt17(v.var_estimate) << ",\"hull_rank\":" << in.hull_rank
       << ",\"max_contact_defect\":" << fmt17(v.max_contact_defect)
       << ",\"max_speed\":" << fmt17(v.max_speed)
       << ",\"slow_sample_fraction\":" << fmt17(v.slow_sample_fraction)
       << ",\"support_allowed_distance\":" << fmt17(v.support_allowed_distance);
    if (in.general) {
        const GeneralDiagnostics& g = *in.general;
        os << ",\"general\":{\"kept_weight\":" << fmt17(g.kept_weight)
           << ",\"dropped_weight\":" << fmt17(g.dropped_weight)
           << ",\"kept_curves\":" << g.kept_curves << ",\"dropped_curves\":" << g.dropped_curves
           << ",\"mean_clipped_duration\":" << fmt17(g.mean_clipped_duration)
           << ",\"vertical_fraction\":" << fmt17(g.vertical_fraction)
           << ",\"lifted_divergence_residual\":" << fmt17(g.lifted_divergence_residual)
           << ",\"lifted_var\":" << fmt17(g.lifted_var) << '}';
    }
    if (in.schedule) {
        os << ",\"epsilon_schedule\":[";
        for (size_t i = 0; i < in.schedule->size(); ++i) {
            const EpsilonStage& st = (*in.schedule)[i];
            if (i) os << ',';
            os << "{\"epsilon\":" << fmt17(st.eps)
               << ",\"recon_err_vs_mu\":" << fmt17(st.recon_err_vs_mu)
               << ",\"mass_identity_rel\":" << fmt17(st.mass_identity_rel)
               << ",\"total_weight\":" << fmt17(st.nu.total()) << '}';
        }
        os << ']';
    }
    os << "}\n";
}

}  // namespace heis::io

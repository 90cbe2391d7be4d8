#include "dyadic/runner.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace dyadic {

namespace {

unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    if (const char* env = std::getenv("DYADIC_ATLAS_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 0;  // estimate_constant falls back to hardware concurrency
}

class OutputSink {
  public:
    explicit OutputSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

// Exact value first; a decimal rendering only ever accompanies it.
std::string with_approx(const Rational& q) {
    std::ostringstream os;
    os << to_string(q);
    if (q.get_den() != 1) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6g", q.get_d());
        os << " (~" << buf << ")";
    }
    return os.str();
}

const char* verdict_kind_name(VerdictKind k) {
    switch (k) {
        case VerdictKind::Far: return "FAR";
        case VerdictKind::NotFar: return "NOT_FAR";
        default: return "UNDECIDED";
    }
}

const char* overall_verdict_name(Adjacency a) {
    switch (a) {
        case Adjacency::Adjacent: return "ADJACENT";
        case Adjacency::NotAdjacent: return "NOT_ADJACENT";
        default: return "UNDECIDED";
    }
}

void print_certificate_table(const AdjacencyCertificate& cert, std::ostream& out) {
    out << "family:";
    for (const auto& l : cert.labels) out << ' ' << l;
    out << "\nbases:";
    for (const auto b : cert.base_set) out << ' ' << b;
    out << "\noverall: " << overall_verdict_name(cert.overall) << "\n";
    const auto dump = [&](const char* name, const auto& matrix) {
        out << name << ":\n";
        for (const auto& [key, v] : matrix) {
            const auto [i, k, s] = key;
            out << "  " << (i + 1) << "-" << (k + 1) << "/" << (s + 1) << "  "
                << verdict_kind_name(v.kind) << "  bound " << with_approx(v.bound);
            if (v.witness) {
                out << "  witness(base " << cert.base_set[v.witness->base_index] << ", scale "
                    << v.witness->scale << ", k1 " << to_string(v.witness->k1) << ", k2 "
                    << to_string(v.witness->k2) << ")";
            }
            out << "\n";
        }
    };
    dump("condition1", cert.condition1);
    dump("condition2", cert.condition2);
    if (cert.overall == Adjacency::Adjacent) {
        out << "origin bound: " << with_approx(cert.origin_bound) << "\n";
        out << "location bound: " << with_approx(cert.location_bound) << "\n";
        out << "comparability cap: " << with_approx(comparability_cap(cert)) << "\n";
    }
}

int run_certify(const RunConfig& cfg) {
    const Family family = load_family(cfg.family_path);
    const AdjacencyCertificate cert =
        check_adjacency(family.grids, cfg.depth_small, cfg.j_min, cfg.depth_large);
    OutputSink sink(cfg.out_path);
    if (cfg.output == OutputFormat::Table) {
        print_certificate_table(cert, sink.stream());
    } else {
        sink.stream() << to_json(cert).dump(2) << "\n";
    }
    switch (cert.overall) {
        case Adjacency::Adjacent: return kExitAdjacent;
        case Adjacency::NotAdjacent: return kExitNotAdjacent;
        default: return kExitUndecided;
    }
}

int run_cover(const RunConfig& cfg) {
    const Family family = load_family(cfg.family_path, /*require_complete=*/false);
    if (family.grids.empty()) throw FamilyParseError("/grids", "cover needs at least one grid");
    if (cfg.cube_corner.size() != family.dimension) {
        throw FamilyParseError("--corner", "expected " + std::to_string(family.dimension) +
                                               " coordinates");
    }
    if (cfg.cube_side <= 0) throw FamilyParseError("--side", "must be positive");
    Cube q;
    q.kind = CubeKind::Open;
    q.corner = cfg.cube_corner;
    q.side = cfg.cube_side;

    const auto res = smallest_comparable(family.grids, q, cfg.ratio_cap);
    OutputSink sink(cfg.out_path);
    if (cfg.output == OutputFormat::Table) {
        if (res) {
            sink.stream() << "covered by grid " << (res->grid_index + 1) << " ("
                          << family.grids[res->grid_index].label << ")\n"
                          << "cube corner:";
            for (const auto& c : res->cube.corner) sink.stream() << ' ' << to_string(c);
            sink.stream() << "\ncube side: " << with_approx(res->cube.side) << "\n"
                          << "ratio: " << with_approx(res->ratio) << "\n";
        } else {
            sink.stream() << "no cover within ratio cap " << with_approx(cfg.ratio_cap) << "\n";
        }
    } else {
        nlohmann::json j;
        j["query"] = to_json(q);
        j["ratio_cap"] = to_string(cfg.ratio_cap);
        if (res) {
            j["covered_by_grid"] = res->grid_index + 1;
            j["cube"] = to_json(res->cube);
            j["ratio"] = to_string(res->ratio);
        } else {
            j["covered_by_grid"] = nullptr;
        }
        sink.stream() << j.dump(2) << "\n";
    }
    return 0;
}

int run_estimate(const RunConfig& cfg) {
    const Family family = load_family(cfg.family_path);
    const ConstantEstimate report =
        estimate_constant(family.grids, cfg.scale_lo, cfg.scale_hi, cfg.samples, cfg.seed,
                          cfg.ratio_cap, resolve_threads(cfg.threads));
    OutputSink sink(cfg.out_path);
    if (cfg.output == OutputFormat::Json) {
        sink.stream() << to_json(report).dump(2) << "\n";
    } else if (cfg.output == OutputFormat::Csv) {
        write_csv(report, sink.stream());
    } else {
        sink.stream() << "scales " << cfg.scale_lo << ".." << cfg.scale_hi << ", " << cfg.samples
                      << " samples/scale, seed " << cfg.seed << "\n"
                      << "max ratio: " << with_approx(report.max_ratio) << "\n"
                      << "failures (cap " << with_approx(report.ratio_cap)
                      << "): " << report.total_failures << "\n";
    }
    return 0;
}

int run_witness(const RunConfig& cfg) {
    const Family family = load_family(cfg.family_path, /*require_complete=*/false);
    if (family.grids.size() < 2 || family.dimension != 1) {
        throw FamilyParseError("/grids", "witness needs a one-dimensional family of two grids");
    }
    const std::uint64_t n1 = family.grids[0].base, n2 = family.grids[1].base;
    const Rational delta = family.grids[0].origin[0] - family.grids[1].origin[0];
    const IncompatibilityWitness w =
        incompatibility_witness(n1, n2, delta, cfg.witness_C, cfg.witness_m_max);

    OutputSink sink(cfg.out_path);
    if (cfg.output == OutputFormat::Table) {
        if (w.found) {
            sink.stream() << "witness at m " << w.m << ": k1 " << to_string(w.k1) << ", k2 "
                          << to_string(w.k2) << "\n"
                          << "gap: " << with_approx(w.gap) << "\n"
                          << "normalized gap: " << with_approx(w.normalized) << " < C "
                          << with_approx(cfg.witness_C) << "\n"
                          << "psi1 " << w.psi1 << ", psi2 " << w.psi2 << "\n";
        } else {
            sink.stream() << "exhausted at m_max " << w.m_limit << "\n";
        }
    } else {
        nlohmann::json j;
        j["n1"] = n1;
        j["n2"] = n2;
        j["delta"] = to_string(delta);
        j["C"] = to_string(cfg.witness_C);
        j["found"] = w.found;
        if (w.found) {
            j["m"] = w.m;
            j["k1"] = to_string(w.k1);
            j["k2"] = to_string(w.k2);
            j["gap"] = to_string(w.gap);
            j["normalized"] = to_string(w.normalized);
            j["psi1"] = w.psi1;
            j["psi2"] = w.psi2;
        } else {
            j["m_max"] = w.m_limit;
        }
        sink.stream() << j.dump(2) << "\n";
    }
    return w.found ? 0 : kExitUndecided;
}

int run_construct(const RunConfig& cfg) {
    Family family = load_family(cfg.family_path, /*require_complete=*/false);
    if (cfg.grid_index < 1 || cfg.grid_index > family.grids.size()) {
        throw FamilyParseError("--grid-index", "out of range");
    }
    GridRep& target = family.grids[cfg.grid_index - 1];
    if (cfg.drop_k) {
        target = drop_generations(target, *cfg.drop_k);
    } else if (!cfg.shift.empty()) {
        target = rerepresent(target, cfg.shift, cfg.construct_depth);
    } else {
        throw FamilyParseError("construct", "needs --drop or --shift");
    }
    if (cfg.out_path.empty()) {
        std::cout << family_to_json(family).dump(2) << "\n";
    } else {
        save_family(family, cfg.out_path);
    }
    return 0;
}

int run_project(const RunConfig& cfg) {
    const Family family = load_family(cfg.family_path, /*require_complete=*/false);
    if (cfg.coordinate < 1 || cfg.coordinate > family.dimension) {
        throw FamilyParseError("--coordinate", "out of range");
    }
    Family out;
    out.dimension = 1;
    out.grids = project(family.grids, cfg.coordinate - 1);
    if (cfg.out_path.empty()) {
        std::cout << family_to_json(out).dump(2) << "\n";
    } else {
        save_family(out, cfg.out_path);
    }
    return 0;
}

}  // namespace

int run(const RunConfig& config) {
    try {
        switch (config.command) {
            case Command::Certify: return run_certify(config);
            case Command::Cover: return run_cover(config);
            case Command::Estimate: return run_estimate(config);
            case Command::Witness: return run_witness(config);
            case Command::Construct: return run_construct(config);
            case Command::Project: return run_project(config);
        }
    } catch (const FamilyParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}

}  // namespace dyadic

// Batch front-end for exact dyadic-grid certification and covering
// experiments. One subcommand per process; see --help per subcommand.

#include "dyadic/runner.hpp"

#include <CLI11.hpp>

#include <string>
#include <vector>

namespace {

dyadic::Rational parse_rational_arg(const std::string& text, const std::string& flag) {
    try {
        return dyadic::parse_rational(text);
    } catch (const std::invalid_argument&) {
        throw CLI::ValidationError(flag, "expected a rational \"p/q\"");
    }
}

std::pair<std::int64_t, std::int64_t> parse_scales(const std::string& text) {
    const auto pos = text.find("..");
    if (pos == std::string::npos) throw CLI::ValidationError("--scales", "expected LO..HI");
    try {
        return {std::stoll(text.substr(0, pos)), std::stoll(text.substr(pos + 2))};
    } catch (const std::exception&) {
        throw CLI::ValidationError("--scales", "expected LO..HI");
    }
}

dyadic::Point parse_point(const std::string& text, const std::string& flag) {
    dyadic::Point out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string part =
            comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
        out.push_back(parse_rational_arg(part, flag));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<dyadic::BigInt> parse_shift(const std::string& text) {
    std::vector<dyadic::BigInt> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string part =
            comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
        dyadic::BigInt v;
        if (v.set_str(part, 10) != 0) throw CLI::ValidationError("--shift", "expected integers");
        out.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact certification and covering experiments for n-adic grid families"};
    app.require_subcommand(1);

    dyadic::RunConfig cfg;
    std::string ratio_cap = "10", scales = "-8..8", output = "table";
    std::string witness_C = "1/10", corner, side, shift;

    const auto add_common = [&](CLI::App* sub, bool with_family = true) {
        if (with_family) sub->add_option("--family", cfg.family_path, "family JSON file")->required();
        sub->add_option("--out", cfg.out_path, "output path (default stdout)");
        sub->add_option("--output", output, "csv|json|table");
    };

    auto* certify = app.add_subcommand("certify", "certify adjacency of a family");
    add_common(certify);
    certify->add_option("--depth-small", cfg.depth_small, "origin-gap scan depth");
    certify->add_option("--J", cfg.j_min, "first generation for location gaps");
    certify->add_option("--depth-large", cfg.depth_large, "location-gap scan depth");

    auto* cover = app.add_subcommand("cover", "smallest comparable cube for a query cube");
    add_common(cover);
    cover->add_option("--corner", corner, "query corner, comma-separated rationals")->required();
    cover->add_option("--side", side, "query side, rational")->required();
    cover->add_option("--ratio-cap", ratio_cap, "largest allowed side ratio");

    auto* estimate = app.add_subcommand("estimate", "sample covering ratios across scales");
    add_common(estimate);
    estimate->add_option("--scales", scales, "LO..HI generation range");
    estimate->add_option("--samples", cfg.samples, "cubes per scale");
    estimate->add_option("--seed", cfg.seed, "RNG seed");
    estimate->add_option("--ratio-cap", ratio_cap, "failure threshold for the ratio");
    estimate->add_option("--threads", cfg.threads, "parallel scales (0: env/hardware)");

    auto* witness = app.add_subcommand("witness", "search a lattice-collapse witness for a pair");
    add_common(witness);
    witness->add_option("--C", witness_C, "target constant");
    witness->add_option("--m-max", cfg.witness_m_max, "largest scale to try");

    auto* construct = app.add_subcommand("construct", "derive a family (drop generations / shift)");
    add_common(construct);
    construct->add_option("--grid-index", cfg.grid_index, "1-based grid to transform")->required();
    construct->add_option("--drop", cfg.drop_k, "keep every k-th generation");
    construct->add_option("--shift", shift, "origin shift, comma-separated integers");
    construct->add_option("--depth", cfg.construct_depth, "digit absorption depth for --shift");

    auto* project = app.add_subcommand("project", "project a family onto one coordinate");
    add_common(project);
    project->add_option("--coordinate", cfg.coordinate, "1-based coordinate")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(certify)) cfg.command = dyadic::Command::Certify;
        if (app.got_subcommand(cover)) {
            cfg.command = dyadic::Command::Cover;
            cfg.cube_corner = parse_point(corner, "--corner");
            cfg.cube_side = parse_rational_arg(side, "--side");
        }
        if (app.got_subcommand(estimate)) {
            cfg.command = dyadic::Command::Estimate;
            std::tie(cfg.scale_lo, cfg.scale_hi) = parse_scales(scales);
        }
        if (app.got_subcommand(witness)) {
            cfg.command = dyadic::Command::Witness;
            cfg.witness_C = parse_rational_arg(witness_C, "--C");
        }
        if (app.got_subcommand(construct)) {
            cfg.command = dyadic::Command::Construct;
            if (!shift.empty()) cfg.shift = parse_shift(shift);
        }
        if (app.got_subcommand(project)) cfg.command = dyadic::Command::Project;

        cfg.ratio_cap = parse_rational_arg(ratio_cap, "--ratio-cap");
        if (output == "csv") {
            cfg.output = dyadic::OutputFormat::Csv;
        } else if (output == "json") {
            cfg.output = dyadic::OutputFormat::Json;
        } else if (output == "table") {
            cfg.output = dyadic::OutputFormat::Table;
        } else {
            throw CLI::ValidationError("--output", "expected csv|json|table");
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    }

    return dyadic::run(cfg);
}

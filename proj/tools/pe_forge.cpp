// pe-forge: patch orderings, sinusoidal positional embeddings, structural
// integrity metrics, the three-cell benchmark, and context-bias optimization.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pef/embedding.hpp"
#include "pef/io.hpp"
#include "pef/metrics.hpp"
#include "pef/optimize.hpp"
#include "pef/order.hpp"
#include "pef/three_cell.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_run_json(const fs::path& near, const json& config) {
    const fs::path dir = near.has_parent_path() ? near.parent_path() : fs::path(".");
    pef::atomic_write_file(dir / "run.json", config.dump(2) + "\n");
}

pef::PatchOrder make_order(const std::string& kind, pef::GridShape shape) {
    if (kind == "zigzag") return pef::zigzag_order(shape);
    if (kind == "hilbert") return pef::hilbert_order(shape);
    if (kind == "gilbert") return pef::gilbert_order(shape);
    throw std::invalid_argument("unknown order kind: " + kind);
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::istringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

struct PesiInput {
    pef::SimilarityField field;
    json config;
};

PesiInput load_pe(const fs::path& path) {
    const pef::PeFile pe = pef::read_pe_csv(path);
    PesiInput in{pef::cosine_field(pe.field),
                 json{{"d_model", pe.field.d_model},
                      {"base", pe.base},
                      {"scale", pe.scale},
                      {"grid", {{"width", pe.field.shape.width},
                                {"height", pe.field.shape.height}}}}};
    return in;
}

int run(int argc, char** argv) {
    CLI::App app{"patch ordering and positional embedding analysis toolkit"};
    app.require_subcommand(1);

    // gen-order
    auto* gen_order = app.add_subcommand("gen-order", "generate a patch order");
    std::string go_kind;
    int go_w = 0, go_h = 0;
    std::string go_out;
    gen_order->add_option("--kind", go_kind, "zigzag|hilbert|gilbert")->required();
    gen_order->add_option("--width", go_w)->required();
    gen_order->add_option("--height", go_h)->required();
    gen_order->add_option("--out", go_out)->required();

    // gen-pe
    auto* gen_pe = app.add_subcommand("gen-pe", "build sinusoidal embeddings");
    std::string gp_order, gp_out, gp_bias;
    int gp_d = 768;
    double gp_base = 10000.0, gp_scale = 1.0;
    gen_pe->add_option("--order", gp_order, "order.csv")->required();
    gen_pe->add_option("--dmodel", gp_d);
    gen_pe->add_option("--base", gp_base);
    gen_pe->add_option("--scale", gp_scale);
    gen_pe->add_option("--bias", gp_bias, "optional bias.csv added to the order");
    gen_pe->add_option("--out", gp_out)->required();

    // simmap
    auto* simmap = app.add_subcommand("simmap", "similarity map around a center");
    std::string sm_pe, sm_center, sm_out;
    simmap->add_option("--pe", sm_pe, "pe.csv")->required();
    simmap->add_option("--center", sm_center, "ROW,COL")->required();
    simmap->add_option("--out", sm_out, "output PGM; raw CSV written alongside")
        ->required();

    // pesi
    auto* pesi = app.add_subcommand("pesi", "structural integrity metrics");
    std::string ps_pe, ps_sweep, ps_out;
    int ps_buckets = 60;
    pesi->add_option("--pe", ps_pe, "pe.csv")->required();
    pesi->add_option("--buckets", ps_buckets);
    pesi->add_option("--sweep", ps_sweep, "comma-separated bucket counts");
    pesi->add_option("--out", ps_out)->required();

    // three-cell gen
    auto* three_cell = app.add_subcommand("three-cell", "three-cell benchmark");
    three_cell->require_subcommand(1);
    auto* tc_gen = three_cell->add_subcommand("gen", "generate a dataset");
    int tc_count = 0;
    std::string tc_task, tc_out;
    std::uint64_t tc_seed = 0;
    tc_gen->add_option("--count", tc_count)->required();
    tc_gen->add_option("--task", tc_task, "distance|orientation|area|vecsum|sixclass")
        ->required();
    tc_gen->add_option("--seed", tc_seed)->required();
    tc_gen->add_option("--out", tc_out)->required();

    // optimize
    auto* optimize = app.add_subcommand("optimize", "optimize a context bias");
    std::string op_order, op_weights = "1,0,0", op_out, op_schedule = "anneal";
    int op_d = 768, op_buckets = 60, op_iters = 1000;
    double op_base = 10000.0, op_scale_prop = 0.25;
    std::uint64_t op_seed = 0;
    optimize->add_option("--order", op_order)->required();
    optimize->add_option("--dmodel", op_d);
    optimize->add_option("--base", op_base);
    optimize->add_option("--weights", op_weights, "MU,MD,ASU");
    optimize->add_option("--buckets", op_buckets);
    optimize->add_option("--iters", op_iters);
    optimize->add_option("--seed", op_seed);
    optimize->add_option("--proposal-scale", op_scale_prop);
    optimize->add_option("--schedule", op_schedule, "anneal|coordinate");
    optimize->add_option("--out", op_out, "bias.csv,trace.csv")->required();

    // compare
    auto* compare = app.add_subcommand("compare", "PESI metrics across methods");
    int cp_w = 14, cp_h = 14, cp_d = 768, cp_buckets = 60, cp_iters = 1000;
    double cp_base = 10000.0, cp_scale = 1.0;
    std::string cp_methods = "zigzag,gilbert", cp_weights = "1,0,0", cp_out;
    std::uint64_t cp_seed = 0;
    compare->add_option("--width", cp_w);
    compare->add_option("--height", cp_h);
    compare->add_option("--dmodel", cp_d);
    compare->add_option("--base", cp_base);
    compare->add_option("--scale", cp_scale);
    compare->add_option("--buckets", cp_buckets);
    compare->add_option("--methods", cp_methods,
                        "comma list of zigzag|hilbert|gilbert|gilbert+opt");
    compare->add_option("--weights", cp_weights, "MU,MD,ASU for gilbert+opt");
    compare->add_option("--iters", cp_iters);
    compare->add_option("--seed", cp_seed);
    compare->add_option("--out", cp_out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (gen_order->parsed()) {
        const pef::PatchOrder order = make_order(go_kind, {go_w, go_h});
        pef::write_order_csv(go_out, order);
        write_run_json(go_out, {{"subcommand", "gen-order"},
                                {"kind", go_kind},
                                {"width", go_w},
                                {"height", go_h},
                                {"out", go_out}});
    } else if (gen_pe->parsed()) {
        pef::PatchOrder order = pef::read_order_csv(gp_order);
        if (!gp_bias.empty())
            order = pef::apply_bias(order, pef::read_bias_csv(gp_bias, order.shape));
        order = pef::scale_positions(order, gp_scale);
        const pef::EmbeddingField field =
            pef::embed(order, pef::make_frequencies(gp_d, gp_base));
        pef::write_pe_csv(gp_out, field, gp_base, gp_scale);
        write_run_json(gp_out, {{"subcommand", "gen-pe"},
                                {"order", gp_order},
                                {"bias", gp_bias},
                                {"dmodel", gp_d},
                                {"base", gp_base},
                                {"scale", gp_scale},
                                {"out", gp_out}});
    } else if (simmap->parsed()) {
        const PesiInput in = load_pe(sm_pe);
        const auto comma = sm_center.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("--center expects ROW,COL");
        const int row = std::stoi(sm_center.substr(0, comma));
        const int col = std::stoi(sm_center.substr(comma + 1));
        const pef::GridShape shape = in.field.shape;
        if (row < 0 || row >= shape.height || col < 0 || col >= shape.width)
            throw std::invalid_argument("center outside grid");

        const int center = row * shape.width + col;
        std::vector<std::uint8_t> gray(shape.cells());
        std::ostringstream csv;
        csv << "row,col,similarity\n";
        for (int i = 0; i < shape.cells(); ++i) {
            const double v = in.field.at(center, i);
            gray[i] = static_cast<std::uint8_t>(std::lround((v + 1.0) / 2.0 * 255.0));
            csv << i / shape.width << ',' << i % shape.width << ','
                << pef::format_double(v) << '\n';
        }
        pef::atomic_write_file(sm_out,
                               pef::encode_pgm(shape.width, shape.height, gray));
        pef::atomic_write_file(fs::path(sm_out).replace_extension(".csv"), csv.str());
        write_run_json(sm_out, {{"subcommand", "simmap"},
                                {"pe", sm_pe},
                                {"center", sm_center},
                                {"out", sm_out}});
    } else if (pesi->parsed()) {
        PesiInput in = load_pe(ps_pe);
        const pef::PesiReport report = pef::pesi_report(in.field, ps_buckets);
        json sweep = json::array();
        if (!ps_sweep.empty()) {
            const std::vector<int> counts = parse_int_list(ps_sweep);
            for (const auto& [n, md] : pef::md_sweep(in.field, counts))
                sweep.push_back({{"n", n}, {"m_d", md}});
        }
        json out{{"m_u", report.m_u},
                 {"m_d", report.m_d},
                 {"n_buckets", report.n_buckets},
                 {"a_su", report.a_su},
                 {"sweep", sweep},
                 {"config", in.config},
                 {"warnings", report.warnings}};
        pef::atomic_write_file(ps_out, out.dump(2) + "\n");
        write_run_json(ps_out, {{"subcommand", "pesi"},
                                {"pe", ps_pe},
                                {"buckets", ps_buckets},
                                {"sweep", ps_sweep},
                                {"out", ps_out}});
    } else if (three_cell->parsed()) {
        pef::DatasetSpec spec;
        spec.count = tc_count;
        spec.seed = tc_seed;
        spec.task = pef::parse_task(tc_task);
        pef::gen_dataset(spec, tc_out);
        write_run_json(fs::path(tc_out) / "manifest.csv",
                       {{"subcommand", "three-cell gen"},
                        {"count", tc_count},
                        {"task", tc_task},
                        {"seed", tc_seed},
                        {"grid", spec.grid},
                        {"image_side", spec.image_side},
                        {"patch", spec.patch},
                        {"out", tc_out}});
    } else if (optimize->parsed()) {
        const auto comma = op_out.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("--out expects bias.csv,trace.csv");
        const std::string bias_path = op_out.substr(0, comma);
        const std::string trace_path = op_out.substr(comma + 1);

        std::vector<double> wv;
        {
            std::istringstream ss(op_weights);
            std::string tok;
            while (std::getline(ss, tok, ',')) wv.push_back(std::stod(tok));
        }
        if (wv.size() != 3)
            throw std::invalid_argument("--weights expects MU,MD,ASU");

        const pef::PatchOrder order = pef::read_order_csv(op_order);
        pef::ObjectiveWeights weights{wv[0], wv[1], wv[2], op_buckets};
        pef::OptConfig cfg;
        cfg.iterations = op_iters;
        cfg.seed = op_seed;
        cfg.proposal_scale = op_scale_prop;
        cfg.schedule = op_schedule == "coordinate" ? pef::Schedule::Coordinate
                                                   : pef::Schedule::Anneal;
        const pef::OptResult result = pef::optimize_bias(
            order, pef::make_frequencies(op_d, op_base), weights, cfg);

        pef::write_bias_csv(bias_path, result.bias);
        std::ostringstream trace;
        trace << "iteration,j_current,j_best\n";
        for (const auto& p : result.trace)
            trace << p.iteration << ',' << pef::format_double(p.j_current) << ','
                  << pef::format_double(p.j_best) << '\n';
        pef::atomic_write_file(trace_path, trace.str());
        write_run_json(bias_path, {{"subcommand", "optimize"},
                                   {"order", op_order},
                                   {"dmodel", op_d},
                                   {"base", op_base},
                                   {"weights", op_weights},
                                   {"buckets", op_buckets},
                                   {"iters", op_iters},
                                   {"seed", op_seed},
                                   {"proposal_scale", op_scale_prop},
                                   {"schedule", op_schedule},
                                   {"j_initial", result.j_initial},
                                   {"j_best", result.j_best},
                                   {"out", op_out}});
    } else if (compare->parsed()) {
        std::vector<double> wv;
        {
            std::istringstream ss(cp_weights);
            std::string tok;
            while (std::getline(ss, tok, ',')) wv.push_back(std::stod(tok));
        }
        if (wv.size() != 3)
            throw std::invalid_argument("--weights expects MU,MD,ASU");

        const pef::GridShape shape{cp_w, cp_h};
        const pef::FrequencySet freqs = pef::make_frequencies(cp_d, cp_base);
        std::ostringstream csv;
        csv << "method,m_u,m_d,a_su\n";
        std::istringstream ss(cp_methods);
        std::string method;
        while (std::getline(ss, method, ',')) {
            pef::PatchOrder order{shape, {}};
            if (method == "gilbert+opt") {
                const pef::PatchOrder base_order = pef::gilbert_order(shape);
                pef::ObjectiveWeights weights{wv[0], wv[1], wv[2], cp_buckets};
                pef::OptConfig cfg;
                cfg.iterations = cp_iters;
                cfg.seed = cp_seed;
                const pef::OptResult result =
                    pef::optimize_bias(base_order, freqs, weights, cfg);
                order = pef::apply_bias(base_order, result.bias);
            } else {
                order = make_order(method, shape);
            }
            const pef::SimilarityField field = pef::cosine_field(
                pef::embed(pef::scale_positions(order, cp_scale), freqs));
            const pef::PesiReport report = pef::pesi_report(field, cp_buckets);
            csv << method << ',' << pef::format_double(report.m_u) << ','
                << pef::format_double(report.m_d) << ','
                << pef::format_double(report.a_su) << '\n';
        }
        pef::atomic_write_file(cp_out, csv.str());
        write_run_json(cp_out, {{"subcommand", "compare"},
                                {"width", cp_w},
                                {"height", cp_h},
                                {"dmodel", cp_d},
                                {"base", cp_base},
                                {"scale", cp_scale},
                                {"buckets", cp_buckets},
                                {"methods", cp_methods},
                                {"weights", cp_weights},
                                {"iters", cp_iters},
                                {"seed", cp_seed},
                                {"out", cp_out}});
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const pef::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}

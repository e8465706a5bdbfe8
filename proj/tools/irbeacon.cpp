// irbeacon: codebook generation, sequence simulation, pipeline runs and evaluation.
#include "irbeacon/codebook.hpp"
#include "irbeacon/error.hpp"
#include "irbeacon/pipeline.hpp"
#include "irbeacon/scene_config.hpp"
#include "irbeacon/simulator.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace irb;

namespace {

enum Exit { kOk = 0, kUsage = 1, kIo = 2, kData = 3 };

struct Thresholds {
    int binarize = 5;
    int min_area = 3;
    int max_area = 400;
    double hu = 0.2;
    double assoc = 50;
    int prune = 30;
    int window = 7;
    int k1 = 2;
    int k2 = 4;
};

void add_threshold_flags(CLI::App* cmd, Thresholds& t) {
    cmd->add_option("--binarize", t.binarize, "binarization threshold (pixel >= value is set)")
        ->check(CLI::Range(0, 255))->capture_default_str();
    cmd->add_option("--min-area", t.min_area, "smallest proposal box area")->capture_default_str();
    cmd->add_option("--max-area", t.max_area, "largest proposal box area")->capture_default_str();
    cmd->add_option("--hu", t.hu, "Hu-moment distance threshold")->capture_default_str();
    cmd->add_option("--assoc", t.assoc, "track association distance in px")->capture_default_str();
    cmd->add_option("--prune", t.prune, "frames a track may go unmatched")->capture_default_str();
    cmd->add_option("--window", t.window, "orientation samples per window")->capture_default_str();
    cmd->add_option("--k1", t.k1, "low trigger threshold")->capture_default_str();
    cmd->add_option("--k2", t.k2, "high trigger threshold")->capture_default_str();
}

PipelineParams to_params(const Thresholds& t) {
    PipelineParams p;
    p.detector.binarize_threshold = static_cast<std::uint8_t>(t.binarize);
    p.detector.min_area = t.min_area;
    p.detector.max_area = t.max_area;
    p.detector.hu_threshold = t.hu;
    p.tracker.max_distance_px = t.assoc;
    p.tracker.max_unmatched_frames = t.prune;
    p.decoder.window = t.window;
    p.decoder.low_threshold = t.k1;
    p.decoder.high_threshold = t.k2;
    return p;
}

Codebook codebook_or_default(const std::string& path) {
    return path.empty() ? generate_codebook() : read_codebook(fs::path(path));
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    return out;
}

void report(const RunResult& run, const std::vector<FrameRecord>& truth, const std::string& metrics_path) {
    const auto m = evaluate(run, truth);
    print_metrics_table(m, std::cout);
    std::cout << '\n';
    write_metrics_record(m, std::cout);
    if (!metrics_path.empty()) {
        auto out = open_out(metrics_path);
        write_metrics_record(m, out);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Infrared beacon identification toolkit"};
    app.require_subcommand(1);

    std::string out_path = "codebook.txt";
    auto* codebook = app.add_subcommand("codebook", "write the identifier codebook");
    codebook->add_option("-o,--out", out_path, "output file")->capture_default_str();

    std::string config_path, sequence_dir;
    std::uint64_t seed = 1;
    std::optional<double> duration;
    auto* simulate_cmd = app.add_subcommand("simulate", "render a synthetic sequence");
    simulate_cmd->add_option("-c,--config", config_path, "scene config file")->required();
    simulate_cmd->add_option("-o,--out", sequence_dir, "output directory")->required();
    simulate_cmd->add_option("-s,--seed", seed, "noise seed")->capture_default_str();
    simulate_cmd->add_option("-d,--duration", duration, "seconds (default: from config)");

    Thresholds th;
    std::string codebook_path, record_path, metrics_path;
    auto* run = app.add_subcommand("run", "run detection, tracking and decoding over a sequence");
    run->add_option("sequence", sequence_dir, "sequence directory")->required();
    run->add_option("-b,--codebook", codebook_path, "codebook file (default: generated)");
    run->add_option("-r,--record", record_path, "write the per-track run record here");
    run->add_option("-m,--metrics", metrics_path, "write the metrics record here");
    add_threshold_flags(run, th);

    auto* eval = app.add_subcommand("eval", "compare a run record against sequence ground truth");
    eval->add_option("record", record_path, "run record written by 'run --record'")->required();
    eval->add_option("sequence", sequence_dir, "sequence directory with ground truth")->required();
    eval->add_option("-m,--metrics", metrics_path, "write the metrics record here");

    std::string frame_path;
    std::int64_t frame_index = 0;
    auto* detect_cmd = app.add_subcommand("detect", "list detections of a single PGM frame");
    detect_cmd->add_option("frame", frame_path, "PGM file")->required();
    detect_cmd->add_option("--index", frame_index, "frame index to report")->capture_default_str();
    add_threshold_flags(detect_cmd, th);

    std::int64_t bench_frames = 1000;
    auto* bench = app.add_subcommand("bench", "pipeline throughput on rendered frames");
    bench->add_option("-c,--config", config_path, "scene config file")->required();
    bench->add_option("-n,--frames", bench_frames, "frames to render and process")
        ->check(CLI::PositiveNumber)->capture_default_str();
    bench->add_option("-s,--seed", seed, "noise seed")->capture_default_str();
    add_threshold_flags(bench, th);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*codebook) {
            const auto book = generate_codebook();
            write_codebook(book, fs::path(out_path));
            std::cout << book.entries.size() << " identifiers written to " << out_path << '\n';
        } else if (*simulate_cmd) {
            const auto config = load_scene_config(config_path);
            const auto n = simulate(config, duration.value_or(config.duration_s), seed, sequence_dir);
            std::cout << n << " frames written to " << sequence_dir << '\n';
        } else if (*run) {
            const auto book = codebook_or_default(codebook_path);
            const SequenceReader reader(sequence_dir);
            const auto result = run_sequence(reader, book, to_params(th));
            if (!record_path.empty()) {
                auto out = open_out(record_path);
                write_run_record(result, out);
            }
            report(result, reader.records(), metrics_path);
        } else if (*eval) {
            std::ifstream in(record_path);
            if (!in) throw IoError("cannot read " + record_path);
            if (in.peek() == std::ifstream::traits_type::eof()) return kOk;
            const auto result = read_run_record(in);
            report(result, read_sidecar(fs::path(sequence_dir) / kSidecarName), metrics_path);
        } else if (*detect_cmd) {
            Frame frame;
            frame.image = read_pgm(frame_path);
            frame.index = frame_index;
            for (const auto& d : detect(frame, to_params(th).detector))
                std::printf("%lld %d %d %d %d %.6f\n", static_cast<long long>(d.frame_index), d.box.x, d.box.y,
                            d.box.w, d.box.h, d.hu_dist);
        } else if (*bench) {
            const SceneRenderer renderer(load_scene_config(config_path));
            std::vector<Frame> frames;
            frames.reserve(static_cast<std::size_t>(bench_frames));
            for (std::int64_t i = 0; i < bench_frames; ++i) frames.push_back(renderer.render(i, seed).frame);
            const auto r = benchmark(frames, generate_codebook(), to_params(th));
            std::printf("frames %lld\nseconds %.3f\nfps %.1f\n", static_cast<long long>(r.frames), r.seconds, r.fps());
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kData;
    } catch (const DegeneratePatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kData;
    }
    return kOk;
}

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "grasspack/analysis.hpp"
#include "grasspack/codebook_io.hpp"
#include "grasspack/error.hpp"
#include "grasspack/kernels.hpp"
#include "grasspack/packing.hpp"

namespace grasspack {

namespace {


struct GenOptions {
  PackingProblem problem;
  std::string output;
};

struct EvalOptions {
  std::string input;
  bool csv = false;
  int bins = 10;
};

struct ExportOptions {
  std::string input;
  std::string output;
  int height = 0;
  int width = 0;
  ScaleMode scale = ScaleMode::Raw;
  std::string format = "bin";
};

struct StatsOptions {
  std::string input;
  bool csv = false;
  double threshold = -1.0;
  int height = 0;
  int width = 0;
  ScaleMode scale = ScaleMode::Raw;
  std::int64_t baseline_seed = -1;
};

std::string fmt(std::optional<double> v) {
  if (!v) return "undefined";
  std::ostringstream s;
  s << std::setprecision(std::numeric_limits<double>::max_digits10) << *v;
  return s.str();
}

int run_gen(const GenOptions& opt, std::ostream& out) {
  const Codebook c = optimize(opt.problem);
  write_codebook(c, std::filesystem::path(opt.output));
  out << "G(" << c.problem.m << "," << c.problem.k << ") N=" << c.problem.n
      << " metric=" << to_string(c.problem.metric)
      << " min_distance=" << fmt(c.min_distance)
      << " rankin_bound=" << fmt(c.rankin_bound)
      << " rankin_bound_generalized=" << fmt(c.rankin_bound_generalized)
      << " iterations=" << c.iterations_used
      << " converged=" << (c.converged ? "true" : "false") << " -> " << opt.output
      << '\n';
  return kExitOk;
}

int run_eval(const EvalOptions& opt, std::ostream& out) {
  const Codebook c = read_codebook(std::filesystem::path(opt.input));
  const PackingProblem& p = c.problem;
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  if (opt.csv) {
    out << "key,value\n"
        << "m," << p.m << "\nk," << p.k << "\nN," << p.n << "\nmetric,"
        << to_string(p.metric) << "\nseed," << p.seed << "\nmin_distance,"
        << fmt(c.min_distance) << "\nrankin_bound," << fmt(c.rankin_bound)
        << "\nrankin_bound_generalized," << fmt(c.rankin_bound_generalized)
        << "\niterations_used," << c.iterations_used << "\nconverged,"
        << (c.converged ? 1 : 0) << '\n';
  } else {
    out << "m: " << p.m << "\nk: " << p.k << "\nN: " << p.n
        << "\nmetric: " << to_string(p.metric) << "\nseed: " << p.seed
        << "\nmin_distance: " << fmt(c.min_distance)
        << "\nrankin_bound: " << fmt(c.rankin_bound)
        << "\nrankin_bound_generalized: " << fmt(c.rankin_bound_generalized)
        << "\niterations_used: " << c.iterations_used
        << "\nconverged: " << (c.converged ? "true" : "false") << '\n';
  }
  if (c.size() >= 2) {
    const std::vector<double> spectrum = distance_spectrum(c, p.metric);
    const Summary s = summarize(spectrum);
    if (!opt.csv) out << "\ndistance histogram:\n";
    out << "bin_lo,bin_hi,count\n";
    const double lo = s.min;
    const double hi = s.max;
    const int bins = std::max(1, opt.bins);
    const double width = (hi - lo) / bins;
    std::vector<int> counts(static_cast<std::size_t>(bins), 0);
    for (double d : spectrum) {
      int b = width > 0.0 ? static_cast<int>((d - lo) / width) : 0;
      counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))]++;
    }
    for (int b = 0; b < bins; ++b) {
      out << lo + b * width << ',' << (b + 1 == bins ? hi : lo + (b + 1) * width)
          << ',' << counts[static_cast<std::size_t>(b)] << '\n';
    }
  }
  out.precision(old);
  return kExitOk;
}

int run_export(const ExportOptions& opt, std::ostream& out) {
  const Codebook c = read_codebook(std::filesystem::path(opt.input));
  const KernelTensor t = export_kernels(c, {opt.height, opt.width, opt.scale});
  if (opt.format == "csv") {
    std::ofstream f(opt.output, std::ios::trunc);
    if (!f) throw Error(ErrorKind::IoFailure, "cannot open " + opt.output + " for writing");
    write_kernels_csv(t, f);
  } else {
    write_kernels_binary(t, std::filesystem::path(opt.output));
  }
  out << "exported " << t.out_channels << "x" << t.in_channels << "x" << t.height
      << "x" << t.width << " (" << to_string(t.scale_mode) << ") -> " << opt.output
      << '\n';
  return kExitOk;
}

int run_stats(const StatsOptions& opt, std::ostream& out) {
  const std::filesystem::path path(opt.input);
  KernelTensor t;
  if (looks_like_codebook(path)) {
    const Codebook c = read_codebook(path);
    const int h = opt.height > 0 ? opt.height : 1;
    const int w = opt.width > 0 ? opt.width : c.problem.m / h;
    t = export_kernels(c, {h, w, opt.scale});
  } else {
    t = read_kernels_binary(path, opt.scale);
  }
  SparsityConfig cfg;
  if (opt.threshold >= 0.0) cfg.norm_threshold = opt.threshold;
  const KernelStats s = compute_stats(t, cfg);
  if (opt.csv) {
    write_stats_csv(s, out);
  } else {
    write_stats_text(s, out);
  }
  if (opt.baseline_seed >= 0) {
    const KernelTensor base =
        kaiming_normal_tensor(t.out_channels, t.in_channels, t.height, t.width,
                              static_cast<std::uint64_t>(opt.baseline_seed));
    const StatsComparison cmp = compare_reports(s, compute_stats(base, cfg));
    out << (opt.csv ? "" : "\ncomparison against Kaiming-normal baseline (a = input, b = baseline):\n");
    if (opt.csv) {
      write_comparison_csv(cmp, out);
    } else {
      write_comparison_text(cmp, out);
    }
  }
  return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Grassmannian subspace packings and conv-kernel initializers",
               "grasspack"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Optimize a packing and write a codebook file");
  gen_cmd->add_option("--m", gen.problem.m, "Ambient dimension")->required();
  gen_cmd->add_option("--k", gen.problem.k, "Subspace dimension")->required();
  gen_cmd->add_option("--n", gen.problem.n, "Number of subspaces")->required();
  std::string metric_name = "chordal";
  gen_cmd->add_option("--metric", metric_name, "chordal or fs")
      ->check(CLI::IsMember({"chordal", "fs"}))
      ->capture_default_str();
  gen_cmd->add_option("--restarts", gen.problem.restarts)->capture_default_str();
  gen_cmd->add_option("--max-iters", gen.problem.max_iters)->capture_default_str();
  gen_cmd->add_option("--tol", gen.problem.tolerance)->capture_default_str();
  gen_cmd->add_option("--seed", gen.problem.seed)->capture_default_str();
  gen_cmd->add_option("--threads", gen.problem.threads, "0 = hardware concurrency")
      ->capture_default_str();
  gen_cmd->add_option("-o,--output", gen.output, "Codebook file to write")->required();

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Print manifest and distance statistics");
  eval_cmd->add_option("codebook", eval.input)->required()->check(CLI::ExistingFile);
  eval_cmd->add_flag("--csv", eval.csv, "Machine-readable output");
  eval_cmd->add_option("--bins", eval.bins, "Histogram bins")->capture_default_str();

  ExportOptions exp;
  auto* export_cmd = app.add_subcommand("export", "Write the codebook as a conv weight tensor");
  export_cmd->add_option("codebook", exp.input)->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--height", exp.height)->required();
  export_cmd->add_option("--width", exp.width)->required();
  std::string export_scale = "raw";
  export_cmd->add_option("--scale", export_scale, "raw or kaiming")
      ->check(CLI::IsMember({"raw", "kaiming"}))
      ->capture_default_str();
  export_cmd->add_option("--format", exp.format, "bin or csv")
      ->check(CLI::IsMember({"bin", "csv"}))
      ->capture_default_str();
  export_cmd->add_option("-o,--output", exp.output)->required();

  StatsOptions st;
  auto* stats_cmd = app.add_subcommand("stats", "Per-kernel mean, variance, norm and sparsity");
  stats_cmd->add_option("input", st.input, "Codebook or binary kernel file")
      ->required()
      ->check(CLI::ExistingFile);
  stats_cmd->add_flag("--csv", st.csv);
  stats_cmd->add_option("--threshold", st.threshold,
                        "Sparse-kernel norm threshold (default 1e-2 x median norm)");
  stats_cmd->add_option("--height", st.height, "Kernel height for codebook input");
  stats_cmd->add_option("--width", st.width, "Kernel width for codebook input");
  std::string stats_scale = "raw";
  stats_cmd->add_option("--scale", stats_scale, "raw or kaiming, for codebook input")
      ->check(CLI::IsMember({"raw", "kaiming"}))
      ->capture_default_str();
  stats_cmd->add_option("--baseline-seed", st.baseline_seed,
                        "Also compare against a Kaiming-normal tensor of the same shape");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error[Usage]: " << e.what() << '\n';
    return kExitUsage;
  }

  gen.problem.metric = *parse_metric(metric_name);
  exp.scale = *parse_scale_mode(export_scale);
  st.scale = *parse_scale_mode(stats_scale);

  try {
    if (*gen_cmd) return run_gen(gen, out);
    if (*eval_cmd) return run_eval(eval, out);
    if (*export_cmd) return run_export(exp, out);
    if (*stats_cmd) return run_stats(st, out);
  } catch (const Error& e) {
    err << "error[" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error[Internal]: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace grasspack

#include "fovea/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include "fovea/error.hpp"

namespace fovea {

namespace {

using Clock = std::chrono::steady_clock;

std::string op_name(const BenchConfig& cfg) {
  std::string name = cfg.op == BenchOp::Uniform ? "uniform" : (cfg.reuse_grid ? "foveate" : "foveate+grid");
  if (cfg.workers > 1) name += "x" + std::to_string(cfg.workers);
  return name;
}

struct Workload {
  std::vector<FoveaSpec> specs;
  std::map<FoveaSpec, SampleGrid> grids;
};

std::vector<RasterImage> make_images(const BenchConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::vector<RasterImage> images;
  for (int i = 0; i < std::max(1, cfg.image_pool); ++i) {
    images.push_back(synthetic_image(cfg.source, cfg.channels, rng()));
  }
  return images;
}

Workload make_workload(const BenchConfig& cfg, ImageDims target) {
  Workload w;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> cx(0, cfg.source.width - 1);
  std::uniform_int_distribution<int> cy(0, cfg.source.height - 1);
  for (int i = 0; i < std::max(1, cfg.image_pool); ++i) {
    w.specs.push_back({cfg.source, target, {cx(rng), cy(rng)}});
  }
  if (cfg.op == BenchOp::Foveate && cfg.reuse_grid) {
    for (const auto& spec : w.specs) w.grids.try_emplace(spec, build_grid(spec));
  }
  return w;
}

// Runs one iteration and returns a byte of the output so the work is kept.
std::uint8_t run_once(const BenchConfig& cfg, const std::vector<RasterImage>& images,
                      const Workload& w, std::size_t i) {
  const RasterImage& img = images[i % images.size()];
  const FoveaSpec& spec = w.specs[i % w.specs.size()];
  RasterImage out;
  if (cfg.op == BenchOp::Uniform) {
    out = uniform_downsample(img, spec.target);
  } else if (!w.grids.empty()) {
    out = foveate_image(img, w.grids.at(spec));
  } else {
    out = foveate_image(img, build_grid(spec));
  }
  return out.pixels()[out.pixels().size() / 2];
}

double micros_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid))) / 2.0;
  }
  return m;
}

}  // namespace

RasterImage synthetic_image(ImageDims dims, int channels, std::uint64_t seed) {
  RasterImage img(dims, channels);
  std::mt19937_64 rng(seed);
  for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(rng() >> 56);
  return img;
}

std::vector<BenchResult> run_bench(const BenchConfig& cfg) {
  if (cfg.repetitions < 1) throw Error(ErrorCode::InvalidSpec, "repetitions must be >= 1");
  if (cfg.warmup < 0) throw Error(ErrorCode::InvalidSpec, "warmup must be >= 0");
  const std::size_t n_sizes = cfg.sizes.size();
  const auto reps = static_cast<std::size_t>(cfg.repetitions);
  const auto images = make_images(cfg);
  std::vector<Workload> work;
  for (ImageDims target : cfg.sizes) work.push_back(make_workload(cfg, target));

  std::vector<std::vector<double>> samples(n_sizes, std::vector<double>(reps));
  std::vector<double> wall(n_sizes, 0.0);
  volatile std::uint8_t keep = 0;

  for (std::size_t s = 0; s < n_sizes; ++s) {
    for (int i = 0; i < cfg.warmup; ++i) keep = keep + run_once(cfg, images, work[s], i);
  }
  if (cfg.workers <= 1) {
    // Sizes are interleaved per repetition so scheduler noise spreads evenly.
    for (std::size_t i = 0; i < reps; ++i) {
      for (std::size_t s = 0; s < n_sizes; ++s) {
        const auto t0 = Clock::now();
        keep = keep + run_once(cfg, images, work[s], i);
        samples[s][i] = micros_since(t0);
        wall[s] += samples[s][i] / 1e6;
      }
    }
  } else {
    for (std::size_t s = 0; s < n_sizes; ++s) {
      std::atomic<std::size_t> next{0};
      const auto start = Clock::now();
      {
        std::vector<std::jthread> pool;
        for (int t = 0; t < cfg.workers; ++t) {
          pool.emplace_back([&, s] {
            std::uint8_t local = 0;
            for (std::size_t i = next++; i < reps; i = next++) {
              const auto t0 = Clock::now();
              local = static_cast<std::uint8_t>(local + run_once(cfg, images, work[s], i));
              samples[s][i] = micros_since(t0);
            }
            keep = keep + local;
          });
        }
      }
      wall[s] = micros_since(start) / 1e6;
    }
  }

  std::vector<BenchResult> results;
  for (std::size_t s = 0; s < n_sizes; ++s) {
    BenchResult r;
    r.operation = op_name(cfg);
    r.target = cfg.sizes[s];
    r.images = cfg.repetitions;
    r.wall_seconds = wall[s];
    r.mean_us = std::accumulate(samples[s].begin(), samples[s].end(), 0.0) / static_cast<double>(reps);
    r.median_us = median_of(samples[s]);
    r.images_per_s = wall[s] > 0 ? static_cast<double>(r.images) / wall[s] : 0.0;
    results.push_back(std::move(r));
  }
  std::stable_sort(results.begin(), results.end(), [](const BenchResult& a, const BenchResult& b) {
    return a.target.area() < b.target.area();
  });
  return results;
}

void write_bench_csv(std::span<const BenchResult> results, std::ostream& out) {
  out << "operation,width,height,images,mean_us,median_us,images_per_s\n";
  char buf[128];
  for (const auto& r : results) {
    std::snprintf(buf, sizeof buf, "%.3f,%.3f,%.2f", r.mean_us, r.median_us, r.images_per_s);
    out << r.operation << ',' << r.target.width << ',' << r.target.height << ',' << r.images << ','
        << buf << '\n';
  }
}

}  // namespace fovea

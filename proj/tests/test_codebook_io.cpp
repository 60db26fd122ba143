#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "grasspack/codebook_io.hpp"
#include "grasspack/error.hpp"
#include "test_support.hpp"

namespace grasspack {
namespace {

using testing::error_kind_of;

Codebook sample(int m, int k, int n, Metric metric, std::uint64_t seed) {
  PackingProblem p;
  p.m = m;
  p.k = k;
  p.n = n;
  p.metric = metric;
  p.seed = seed;
  p.restarts = 2;
  p.max_iters = 40;
  p.threads = 1;
  return optimize(p);
}

std::string serialize(const Codebook& c) {
  std::ostringstream out(std::ios::binary);
  write_codebook(c, out);
  return out.str();
}

Codebook deserialize(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  return read_codebook(in);
}

std::uint32_t u32_at(const std::string& bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
  }
  return v;
}

double f64_at(const std::string& bytes, std::size_t offset) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
  }
  return std::bit_cast<double>(v);
}

void expect_same(const Codebook& a, const Codebook& b) {
  EXPECT_EQ(a.problem.m, b.problem.m);
  EXPECT_EQ(a.problem.k, b.problem.k);
  EXPECT_EQ(a.problem.n, b.problem.n);
  EXPECT_EQ(a.problem.metric, b.problem.metric);
  EXPECT_EQ(a.problem.seed, b.problem.seed);
  EXPECT_EQ(a.problem.restarts, b.problem.restarts);
  EXPECT_EQ(a.problem.max_iters, b.problem.max_iters);
  EXPECT_EQ(a.problem.tolerance, b.problem.tolerance);
  EXPECT_EQ(a.min_distance, b.min_distance);
  EXPECT_EQ(a.rankin_bound, b.rankin_bound);
  EXPECT_EQ(a.rankin_bound_generalized, b.rankin_bound_generalized);
  EXPECT_EQ(a.iterations_used, b.iterations_used);
  EXPECT_EQ(a.converged, b.converged);
  ASSERT_EQ(a.size(), b.size());
  for (int i = 0; i < a.size(); ++i) {
    const auto& x = a.subspaces[static_cast<std::size_t>(i)].basis();
    const auto& y = b.subspaces[static_cast<std::size_t>(i)].basis();
    ASSERT_EQ(x.size(), y.size());
    EXPECT_EQ(std::memcmp(x.data(), y.data(), sizeof(double) * static_cast<std::size_t>(x.size())), 0);
  }
}

TEST(CodebookFile, RoundTripIsBitExact) {
  std::uint64_t seed = 1;
  for (Metric metric : {Metric::Chordal, Metric::FubiniStudy}) {
    for (auto [m, k, n] : {std::tuple{2, 1, 3}, std::tuple{9, 3, 5}, std::tuple{6, 6, 2}}) {
      const Codebook c = sample(m, k, n, metric, seed++);
      expect_same(c, deserialize(serialize(c)));
    }
  }
}

TEST(CodebookFile, RoundTripThroughDisk) {
  const Codebook c = sample(9, 1, 8, Metric::FubiniStudy, 3);
  const auto path = testing::temp_path("codebook");
  write_codebook(c, path);
  EXPECT_TRUE(looks_like_codebook(path));
  expect_same(c, read_codebook(path));
  std::filesystem::remove(path);
}

TEST(CodebookFile, SingleSubspaceRoundTrip) {
  PackingProblem p;
  p.m = 4;
  p.k = 2;
  p.n = 1;
  const Codebook c = random_codebook(p);
  const Codebook back = deserialize(serialize(c));
  expect_same(c, back);
  EXPECT_FALSE(back.min_distance.has_value());
}

TEST(CodebookFile, ByteLayout) {
  const Codebook c = sample(3, 2, 2, Metric::Chordal, 5);
  const std::string bytes = serialize(c);
  ASSERT_GE(bytes.size(), 12u);
  EXPECT_EQ(bytes.substr(0, 8), "GPKCBK01");
  const std::uint32_t manifest_len = u32_at(bytes, 8);
  const std::size_t payload = 12 + manifest_len;
  ASSERT_EQ(bytes.size(), payload + 2 * 3 * 2 * 8);
  EXPECT_EQ(bytes[12], '{');
  // Subspace-major, column-major inside a basis.
  std::size_t offset = payload;
  for (const Subspace& s : c.subspaces) {
    for (Eigen::Index col = 0; col < 2; ++col) {
      for (Eigen::Index row = 0; row < 3; ++row) {
        EXPECT_EQ(std::bit_cast<std::uint64_t>(f64_at(bytes, offset)),
                  std::bit_cast<std::uint64_t>(s.basis()(row, col)));
        offset += 8;
      }
    }
  }
}

TEST(CodebookFile, ManifestMinDistanceMatchesRecomputation) {
  const Codebook c = sample(5, 2, 6, Metric::Chordal, 8);
  const Codebook back = deserialize(serialize(c));
  const double recomputed = *min_pairwise_distance(back.subspaces, back.problem.metric);
  EXPECT_NEAR(*back.min_distance, recomputed, 1e-9);
}

TEST(CodebookFile, TruncatedPayloadIsMalformed) {
  const std::string bytes = serialize(sample(4, 2, 3, Metric::Chordal, 9));
  for (std::size_t cut : {bytes.size() - 1, bytes.size() - 8, std::size_t{20}, std::size_t{10}, std::size_t{3}}) {
    EXPECT_EQ(error_kind_of([&] { deserialize(bytes.substr(0, cut)); }), ErrorKind::MalformedFile)
        << "cut at " << cut;
  }
}

TEST(CodebookFile, TrailingBytesAreMalformed) {
  const std::string bytes = serialize(sample(4, 2, 3, Metric::Chordal, 9)) + "x";
  EXPECT_EQ(error_kind_of([&] { deserialize(bytes); }), ErrorKind::MalformedFile);
}

TEST(CodebookFile, BadMagicOrVersionIsMalformed) {
  std::string bytes = serialize(sample(4, 2, 3, Metric::Chordal, 9));
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_EQ(error_kind_of([&] { deserialize(bad_magic); }), ErrorKind::MalformedFile);
  std::string future = bytes;
  future[7] = '2';
  EXPECT_EQ(error_kind_of([&] { deserialize(future); }), ErrorKind::MalformedFile);
}

TEST(CodebookFile, InconsistentManifestIsMalformed) {
  const Codebook c = sample(4, 2, 3, Metric::Chordal, 9);
  std::string bytes = serialize(c);
  const std::uint32_t len = u32_at(bytes, 8);
  std::string manifest = bytes.substr(12, len);
  const auto pos = manifest.find("\"N\": 3");
  ASSERT_NE(pos, std::string::npos);
  manifest.replace(pos, 6, "\"N\": 4");
  bytes.replace(12, len, manifest);
  EXPECT_EQ(error_kind_of([&] { deserialize(bytes); }), ErrorKind::MalformedFile);
}

TEST(CodebookFile, CorruptBasisIsDetected) {
  const Codebook c = sample(4, 2, 3, Metric::Chordal, 9);
  std::string bytes = serialize(c);
  const std::size_t payload = 12 + u32_at(bytes, 8);
  // Scale the first basis entry by 1.01.
  const double v = f64_at(bytes, payload) * 1.01 + 1e-3;
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) bytes[payload + i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  EXPECT_EQ(error_kind_of([&] { deserialize(bytes); }), ErrorKind::CorruptBasis);
}

TEST(CodebookFile, UnwritablePathIsIoFailure) {
  const Codebook c = sample(2, 1, 3, Metric::Chordal, 1);
  EXPECT_EQ(error_kind_of([&] { write_codebook(c, std::filesystem::path("/nonexistent/dir/x.gpk")); }),
            ErrorKind::IoFailure);
  EXPECT_EQ(error_kind_of([&] { read_codebook(std::filesystem::path("/nonexistent/x.gpk")); }),
            ErrorKind::IoFailure);
}

}  // namespace
}  // namespace grasspack

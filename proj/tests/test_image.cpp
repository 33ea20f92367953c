#include <gtest/gtest.h>

#include <random>

#include "cmgn/errors.hpp"
#include "cmgn/image.hpp"

namespace cmgn {
namespace {

PlanarImage single_value(Codeword v, int bit_depth = 10) {
  return PlanarImage({CodewordPlane(1, 1, v), CodewordPlane(1, 1, v),
                      CodewordPlane(1, 1, v)},
                     bit_depth);
}

TEST(QuantizeTest, Examples) {
  EXPECT_EQ(quantize_codewords(single_value(0), 2).luma().at(0, 0), 0);
  EXPECT_EQ(quantize_codewords(single_value(515), 2).luma().at(0, 0), 512);
  EXPECT_EQ(quantize_codewords(single_value(1023), 2).luma().at(0, 0), 1020);
}

TEST(QuantizeTest, DropBitsOutOfRange) {
  const PlanarImage img = single_value(7);
  EXPECT_THROW(quantize_codewords(img, -1), InvalidArgument);
  EXPECT_THROW(quantize_codewords(img, 10), InvalidArgument);
  EXPECT_NO_THROW(quantize_codewords(img, 9));
}

TEST(QuantizeTest, IdempotentAndBoundedForAllCodewords) {
  for (int b = 0; b < 10; ++b) {
    CodewordPlane all(1024, 1);
    for (int v = 0; v < 1024; ++v) all.at(v, 0) = static_cast<Codeword>(v);
    const CodewordPlane once = quantize_plane(all, 10, b);
    EXPECT_EQ(quantize_plane(once, 10, b), once);
    for (int v = 0; v < 1024; ++v) {
      const int diff = v - once.at(v, 0);
      EXPECT_GE(diff, 0);
      EXPECT_LT(diff, 1 << b);
    }
    EXPECT_LE(distinct_codewords(once), static_cast<std::size_t>(1024 >> b));
  }
}

TEST(ClampTest, Examples) {
  EXPECT_EQ(clamp_codeword(-3.2, 10), 0);
  EXPECT_EQ(clamp_codeword(1025.7, 10), 1023);
  EXPECT_EQ(clamp_codeword(511.5, 10), 512);
  EXPECT_EQ(clamp_codeword(510.5, 10), 511);
  EXPECT_EQ(clamp_codeword(510.49, 10), 510);
  EXPECT_EQ(clamp_codeword(70000.0, 16), 65535);
  EXPECT_EQ(clamp_codeword(255.6, 8), 255);
}

TEST(ClampTest, MonotoneProperty) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> dist(-50.0, 1100.0);
  for (int i = 0; i < 20000; ++i) {
    double a = dist(gen), b = dist(gen);
    if (a > b) std::swap(a, b);
    EXPECT_LE(clamp_codeword(a, 10), clamp_codeword(b, 10));
  }
}

TEST(DistinctTest, Examples) {
  EXPECT_EQ(distinct_codewords(CodewordPlane(16, 16, 77)), 1u);
  const PlanarImage ramp = make_ramp_image(1024, 4, 10);
  EXPECT_EQ(distinct_codewords(ramp.luma()), 1024u);
  EXPECT_EQ(distinct_codewords(quantize_codewords(ramp, 2).luma()), 256u);
}

TEST(PlanarImageTest, RejectsMismatchedPlanesAndRange) {
  EXPECT_THROW(PlanarImage({CodewordPlane(2, 2), CodewordPlane(2, 3),
                            CodewordPlane(2, 2)},
                           10),
               InvalidArgument);
  EXPECT_THROW(single_value(1024, 10), InvalidArgument);
  EXPECT_NO_THROW(single_value(1023, 10));
  EXPECT_THROW(PlanarImage(4, 4, 7), InvalidArgument);
  EXPECT_THROW(PlanarImage(4, 4, 17), InvalidArgument);
}

TEST(HdrImageTest, RejectsOutOfRange) {
  Plane<float> ok(2, 2, 0.5f), bad(2, 2, 1.0f);
  EXPECT_NO_THROW(HdrImage({ok, ok, ok}));
  EXPECT_THROW(HdrImage({ok, bad, ok}), InvalidArgument);
}

}  // namespace
}  // namespace cmgn

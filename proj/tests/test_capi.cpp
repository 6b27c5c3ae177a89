// Exercises the public shared-library surface only; no internal headers.

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "vofd/vofd.h"

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "vofd_capi" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("image create/save/load round trip through the C API") {
  const fs::path dir = fresh_dir("img");
  std::vector<double> data(12 * 9);
  for (std::size_t i = 0; i < data.size(); ++i)
    data[i] = static_cast<double>((i * 13) % 256);

  vofd_image* img = nullptr;
  REQUIRE(vofd_image_create(12, 9, data.data(), &img) == VOFD_OK);
  CHECK(vofd_image_width(img) == 12);
  CHECK(vofd_image_height(img) == 9);

  const std::string path = (dir / "x.pgm").string();
  REQUIRE(vofd_image_save(img, path.c_str()) == VOFD_OK);

  vofd_image* back = nullptr;
  REQUIRE(vofd_image_load(path.c_str(), &back) == VOFD_OK);
  const double* p = vofd_image_data(back);
  for (std::size_t i = 0; i < data.size(); ++i) CHECK(p[i] == data[i]);
  CHECK(vofd_image_mean(back) == doctest::Approx(vofd_image_mean(img)));

  vofd_image_free(img);
  vofd_image_free(back);
}

TEST_CASE("error paths set status and a diagnostic message") {
  vofd_image* img = nullptr;
  CHECK(vofd_image_load("/no/such/file.pgm", &img) == VOFD_ERR_IO);
  CHECK(std::strlen(vofd_last_error()) > 0);
  CHECK(img == nullptr);

  CHECK(vofd_image_create(0, 4, nullptr, &img) == VOFD_ERR_INVALID);
  CHECK(vofd_image_load(nullptr, &img) == VOFD_ERR_INVALID);
  CHECK(vofd_psnr(nullptr, nullptr, nullptr) == VOFD_ERR_INVALID);

  vofd_config* cfg = nullptr;
  REQUIRE(vofd_config_create(&cfg) == VOFD_OK);
  CHECK(vofd_config_set(cfg, "nope", "1") == VOFD_ERR_CONFIG);
  CHECK(vofd_config_set(cfg, "coeff.eta", "x") == VOFD_ERR_CONFIG);
  vofd_config_free(cfg);
}

TEST_CASE("noise synthesis is deterministic and has the right scale") {
  vofd_image* field1 = nullptr;
  vofd_image* field2 = nullptr;
  REQUIRE(vofd_gamma_noise_field(64, 64, 4, 2024, &field1) == VOFD_OK);
  REQUIRE(vofd_gamma_noise_field(64, 64, 4, 2024, &field2) == VOFD_OK);
  const double* a = vofd_image_data(field1);
  const double* b = vofd_image_data(field2);
  for (int i = 0; i < 64 * 64; ++i) CHECK(a[i] == b[i]);
  CHECK(vofd_image_mean(field1) == doctest::Approx(1.0).epsilon(0.05));

  vofd_image* unit = nullptr;
  REQUIRE(vofd_image_create(64, 64, nullptr, &unit) == VOFD_OK);
  vofd_image* product = nullptr;
  REQUIRE(vofd_apply_multiplicative(unit, field1, &product) == VOFD_OK);
  for (int i = 0; i < 64 * 64; ++i) CHECK(vofd_image_data(product)[i] == 0.0);

  vofd_image_free(field1);
  vofd_image_free(field2);
  vofd_image_free(unit);
  vofd_image_free(product);
}

TEST_CASE("metrics through the C API") {
  std::vector<double> flat(32 * 32, 100.0);
  vofd_image* x = nullptr;
  REQUIRE(vofd_image_create(32, 32, flat.data(), &x) == VOFD_OK);

  double db = 0.0, sim = 0.0;
  REQUIRE(vofd_psnr(x, x, &db) == VOFD_OK);
  CHECK(std::isinf(db));
  REQUIRE(vofd_ssim(x, x, &sim) == VOFD_OK);
  CHECK(sim == doctest::Approx(1.0));

  vofd_image* y = nullptr;
  REQUIRE(vofd_image_create(16, 16, nullptr, &y) == VOFD_OK);
  CHECK(vofd_psnr(x, y, &db) == VOFD_ERR_INVALID);  // shape mismatch

  vofd_image_free(x);
  vofd_image_free(y);
}

TEST_CASE("config get/set/format round trip") {
  vofd_config* cfg = nullptr;
  REQUIRE(vofd_config_create(&cfg) == VOFD_OK);

  char buf[64];
  REQUIRE(vofd_config_get(cfg, "coeff.eta", buf, sizeof(buf)) == VOFD_OK);
  CHECK(std::string(buf) == "3");
  REQUIRE(vofd_config_set(cfg, "coeff.eta", "2") == VOFD_OK);
  REQUIRE(vofd_config_get(cfg, "coeff.eta", buf, sizeof(buf)) == VOFD_OK);
  CHECK(std::string(buf) == "2");

  char* text = nullptr;
  REQUIRE(vofd_config_format(cfg, &text) == VOFD_OK);
  vofd_config* parsed = nullptr;
  REQUIRE(vofd_config_create(&parsed) == VOFD_OK);
  REQUIRE(vofd_config_parse(parsed, text) == VOFD_OK);
  char* text2 = nullptr;
  REQUIRE(vofd_config_format(parsed, &text2) == VOFD_OK);
  CHECK(std::string(text) == std::string(text2));

  vofd_string_free(text);
  vofd_string_free(text2);
  vofd_config_free(cfg);
  vofd_config_free(parsed);
}

TEST_CASE("end-to-end experiment via the C API") {
  const fs::path dir = fresh_dir("run");

  // synthesize a small striped input image
  std::vector<double> data(48 * 48);
  for (int i = 0; i < 48; ++i)
    for (int j = 0; j < 48; ++j)
      data[static_cast<std::size_t>(i) * 48 + j] =
          128.0 + 80.0 * std::sin(0.5 * j) * std::cos(0.3 * i);
  vofd_image* clean = nullptr;
  REQUIRE(vofd_image_create(48, 48, data.data(), &clean) == VOFD_OK);
  const std::string input = (dir / "clean.pgm").string();
  REQUIRE(vofd_image_save(clean, input.c_str()) == VOFD_OK);
  vofd_image_free(clean);

  vofd_config* cfg = nullptr;
  REQUIRE(vofd_config_create(&cfg) == VOFD_OK);
  REQUIRE(vofd_config_set(cfg, "input", input.c_str()) == VOFD_OK);
  REQUIRE(vofd_config_set(cfg, "output_dir", dir.string().c_str()) == VOFD_OK);
  REQUIRE(vofd_config_set(cfg, "noise.enabled", "true") == VOFD_OK);
  REQUIRE(vofd_config_set(cfg, "solver.max_iters", "30") == VOFD_OK);
  REQUIRE(vofd_config_set(cfg, "gabor.scales", "3") == VOFD_OK);
  REQUIRE(vofd_config_set(cfg, "gabor.freq_low", "0.1") == VOFD_OK);

  vofd_report* report = nullptr;
  REQUIRE(vofd_run_experiment(cfg, &report) == VOFD_OK);

  vofd_summary summary;
  REQUIRE(vofd_report_summary(report, &summary) == VOFD_OK);
  CHECK(std::string(summary.model) == "vo_f1l");
  CHECK(summary.looks == 4);
  CHECK(summary.psnr_best >= summary.psnr_noisy);
  CHECK(vofd_report_iterations(report) >= 1);

  double v = 0.0;
  REQUIRE(vofd_report_series(report, VOFD_SERIES_MASS, 0, &v) == VOFD_OK);
  CHECK(v > 0.0);
  CHECK(vofd_report_series(report, VOFD_SERIES_MASS, 100000, &v) == VOFD_ERR_INVALID);

  const vofd_image* restored = vofd_report_image(report);
  REQUIRE(restored != nullptr);
  CHECK(vofd_image_width(restored) == 48);

  CHECK(fs::exists(dir / "clean_vo_f1l_denoised.pgm"));
  CHECK(fs::exists(dir / "clean_vo_f1l_iters.csv"));

  vofd_report_free(report);
  vofd_config_free(cfg);
}

TEST_CASE("suite via the C API") {
  const fs::path dir = fresh_dir("suite");
  std::vector<double> data(32 * 32, 0.0);
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j)
      data[static_cast<std::size_t>(i) * 32 + j] = ((i / 4 + j / 4) % 2) ? 200.0 : 60.0;
  vofd_image* img = nullptr;
  REQUIRE(vofd_image_create(32, 32, data.data(), &img) == VOFD_OK);
  const std::string input = (dir / "board.pgm").string();
  REQUIRE(vofd_image_save(img, input.c_str()) == VOFD_OK);
  vofd_image_free(img);

  std::vector<vofd_config*> cfgs(2, nullptr);
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    REQUIRE(vofd_config_create(&cfgs[i]) == VOFD_OK);
    REQUIRE(vofd_config_set(cfgs[i], "input", input.c_str()) == VOFD_OK);
    REQUIRE(vofd_config_set(cfgs[i], "output_dir", dir.string().c_str()) == VOFD_OK);
    REQUIRE(vofd_config_set(cfgs[i], "noise.enabled", "true") == VOFD_OK);
    REQUIRE(vofd_config_set(cfgs[i], "solver.stop", "fixed_iters") == VOFD_OK);
    REQUIRE(vofd_config_set(cfgs[i], "solver.max_iters", "2") == VOFD_OK);
    REQUIRE(vofd_config_set(cfgs[i], "gabor.scales", "2") == VOFD_OK);
    REQUIRE(vofd_config_set(cfgs[i], "gabor.freq_low", "0.15") == VOFD_OK);
    REQUIRE(vofd_config_set(cfgs[i], "emit.csv", "false") == VOFD_OK);
    REQUIRE(vofd_config_set(cfgs[i], "emit.summary", "false") == VOFD_OK);
    REQUIRE(vofd_config_set(cfgs[i], "emit.denoised", "false") == VOFD_OK);
    REQUIRE(vofd_config_set(cfgs[i], "emit.noisy", "false") == VOFD_OK);
  }
  REQUIRE(vofd_config_set(cfgs[1], "model", "aa") == VOFD_OK);

  const std::string csv = (dir / "suite.csv").string();
  std::vector<vofd_summary> summaries(2);
  std::vector<vofd_status> statuses(2);
  REQUIRE(vofd_run_suite(cfgs.data(), 2, csv.c_str(), 2, summaries.data(),
                         statuses.data()) == VOFD_OK);
  CHECK(statuses[0] == VOFD_OK);
  CHECK(statuses[1] == VOFD_OK);
  CHECK(std::string(summaries[0].model) == "vo_f1l");
  CHECK(std::string(summaries[1].model) == "aa");
  CHECK(fs::exists(csv));

  for (auto* c : cfgs) vofd_config_free(c);
}

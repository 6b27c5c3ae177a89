/*
 * vofd — variable-order fractional diffusion denoiser, public C API.
 *
 * The library removes multiplicative (speckle) noise from grayscale images
 * by evolving a nonlocal diffusion flow whose fractional order adapts to
 * local texture. All state lives behind opaque handles; every function
 * returns a vofd_status and leaves a thread-local diagnostic retrievable
 * via vofd_last_error().
 *
 * Images are 2D grids of double intensities, nominal range [0, 255],
 * row-major. Supported file formats: PGM (P2/P5, 8/16-bit) and grayscale
 * PNG (8/16-bit) for reading; 8-bit PGM (P5) or 8-bit grayscale PNG for
 * writing, selected by file extension (".png" means PNG, anything else PGM).
 */

#ifndef VOFD_H
#define VOFD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define VOFD_API __declspec(dllexport)
#else
#define VOFD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vofd_status {
  VOFD_OK = 0,
  VOFD_ERR_IO = 1,       /* file missing, unreadable or unwritable */
  VOFD_ERR_FORMAT = 2,   /* malformed or unsupported image file */
  VOFD_ERR_CONFIG = 3,   /* invalid parameter value or config key */
  VOFD_ERR_INVALID = 4,  /* bad argument (null handle, shape mismatch) */
  VOFD_ERR_INTERNAL = 5
} vofd_status;

typedef struct vofd_image vofd_image;
typedef struct vofd_config vofd_config;
typedef struct vofd_report vofd_report;

/* Summary of one experiment run. wall_ms is the only field that is not a
 * pure function of (config, input bytes). */
typedef struct vofd_summary {
  char image[128];     /* input file stem */
  char model[16];      /* vo_f1l | vo_fpl | f1p_aa | aa */
  int looks;           /* Gamma noise looks L; 0 when noise synthesis is off */
  double psnr_noisy;   /* PSNR of the initial (noisy) image, dB; NaN if no reference */
  double psnr_best;    /* PSNR of the restored image, dB; NaN if no reference */
  double ssim_noisy;
  double ssim_best;
  int iterations;      /* index of the last executed iteration */
  int best_iteration;  /* iteration the restored image was taken from */
  double wall_ms;
  char stop_reason[24];
} vofd_summary;

VOFD_API const char *vofd_version(void);

/* Message for the most recent failing call on this thread ("" if none). */
VOFD_API const char *vofd_last_error(void);
VOFD_API const char *vofd_status_name(vofd_status status);

/* Frees strings returned by vofd_config_format(). */
VOFD_API void vofd_string_free(char *s);

/* ---- images ---------------------------------------------------------- */

/* data may be NULL (image starts at zero); otherwise width*height doubles. */
VOFD_API vofd_status vofd_image_create(int width, int height,
                                       const double *data, vofd_image **out);
VOFD_API vofd_status vofd_image_load(const char *path, vofd_image **out);
/* Clamps to [0,255], rounds half-to-even, writes 8-bit grayscale. */
VOFD_API vofd_status vofd_image_save(const vofd_image *img, const char *path);
VOFD_API int vofd_image_width(const vofd_image *img);
VOFD_API int vofd_image_height(const vofd_image *img);
VOFD_API const double *vofd_image_data(const vofd_image *img);
VOFD_API double vofd_image_mean(const vofd_image *img);
VOFD_API void vofd_image_free(vofd_image *img);

/* ---- noise synthesis -------------------------------------------------- */

/* I.i.d. Gamma(shape=looks, scale=1/looks) field: mean 1, variance 1/looks.
 * Fully determined by (width, height, looks, seed); generation is
 * counter-based (one splitmix64 stream per pixel), so results do not depend
 * on thread count. */
VOFD_API vofd_status vofd_gamma_noise_field(int width, int height, int looks,
                                            uint64_t seed, vofd_image **out);
/* Pointwise product img*noise (the speckle degradation model). */
VOFD_API vofd_status vofd_apply_multiplicative(const vofd_image *img,
                                               const vofd_image *noise,
                                               vofd_image **out);

/* ---- quality metrics --------------------------------------------------- */

/* 10*log10(255^2/MSE); +infinity when the images are identical. */
VOFD_API vofd_status vofd_psnr(const vofd_image *img,
                               const vofd_image *reference, double *out_db);
/* Mean SSIM over 11x11 Gaussian windows (sigma 1.5), standard constants. */
VOFD_API vofd_status vofd_ssim(const vofd_image *img,
                               const vofd_image *reference, double *out);

/* ---- experiment configuration ----------------------------------------- */

/* Configs are flat "key = value" text with dotted sections, e.g.
 *
 *   input = texture.pgm
 *   model = vo_f1l
 *   noise.enabled = true
 *   noise.looks = 4
 *   coeff.eta = 3
 *
 * vofd_config_create() yields the default parameter set; see README for the
 * full key table. */
VOFD_API vofd_status vofd_config_create(vofd_config **out);
VOFD_API vofd_status vofd_config_parse(vofd_config *cfg, const char *text);
VOFD_API vofd_status vofd_config_load(vofd_config *cfg, const char *path);
VOFD_API vofd_status vofd_config_set(vofd_config *cfg, const char *key,
                                     const char *value);
/* Writes the value of key into buf (always NUL-terminated, truncating if
 * cap is too small; 64 bytes is enough for every key except paths). */
VOFD_API vofd_status vofd_config_get(const vofd_config *cfg, const char *key,
                                     char *buf, size_t cap);
/* Serializes every key in a fixed order; parse(format(c)) == c.
 * Free the result with vofd_string_free(). */
VOFD_API vofd_status vofd_config_format(const vofd_config *cfg, char **out);
VOFD_API void vofd_config_free(vofd_config *cfg);

/* ---- running ----------------------------------------------------------- */

/* Runs the full pipeline (optional noise synthesis, coefficient build,
 * diffusion, metrics) and writes the artifacts selected by the emit.* keys
 * into output_dir. Outputs are a pure function of the config and input
 * bytes. The report must be freed with vofd_report_free(). */
VOFD_API vofd_status vofd_run_experiment(const vofd_config *cfg,
                                         vofd_report **out);

typedef enum vofd_series {
  VOFD_SERIES_PSNR = 0,
  VOFD_SERIES_SSIM = 1,
  VOFD_SERIES_MASS = 2, /* mean intensity */
  VOFD_SERIES_MIN = 3,
  VOFD_SERIES_MAX = 4,
  VOFD_SERIES_ENERGY = 5
} vofd_series;

/* Index of the last executed iteration; records run 0..iterations. */
VOFD_API int vofd_report_iterations(const vofd_report *report);
VOFD_API vofd_status vofd_report_series(const vofd_report *report,
                                        vofd_series series, int iteration,
                                        double *out);
/* Borrowed pointer to the restored image; valid until vofd_report_free. */
VOFD_API const vofd_image *vofd_report_image(const vofd_report *report);
VOFD_API vofd_status vofd_report_summary(const vofd_report *report,
                                         vofd_summary *out);

VOFD_API void vofd_report_free(vofd_report *report);

/* Runs count experiments (config validation happens up front and fails the
 * whole call; individual run failures are recorded and the suite continues)
 * and writes one aggregate CSV row per successful run to csv_path.
 * jobs <= 1 runs sequentially. Optional out arrays (length count) receive
 * per-run summaries and statuses. Returns VOFD_OK only if every run
 * succeeded. */
VOFD_API vofd_status vofd_run_suite(const vofd_config *const *configs,
                                    size_t count, const char *csv_path,
                                    int jobs, vofd_summary *out_summaries,
                                    vofd_status *out_statuses);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* VOFD_H */

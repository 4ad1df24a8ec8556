/*
 * electroar C API.
 *
 * Every call returns an ear_status. On failure a description is available
 * from ear_last_error() on the calling thread until the next failing call.
 * Handles are opaque and owned by the caller; release them with the matching
 * *_destroy function. Destroying NULL is a no-op.
 */
#ifndef ELECTROAR_H
#define ELECTROAR_H

#include <stddef.h>
#include <stdint.h>

#if defined(EAR_BUILDING_LIBRARY)
#define EAR_API __attribute__((visibility("default")))
#else
#define EAR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ear_status {
  EAR_OK = 0,
  EAR_ERR_INVALID_ARGUMENT = 1,
  EAR_ERR_DEGENERATE_GRID = 2,
  EAR_ERR_GEOMETRY_MISMATCH = 3,
  EAR_ERR_DOMAIN = 4,
  EAR_ERR_INSUFFICIENT_DATA = 5,
  EAR_ERR_NON_POSITIVE_MAGNITUDE = 6,
  EAR_ERR_DEGENERATE_FIT = 7,
  EAR_ERR_VALUE_OVERFLOW = 8,
  EAR_ERR_GEOMETRY_OVERFLOW = 9,
  EAR_ERR_BAD_MAGIC = 10,
  EAR_ERR_UNSUPPORTED_VERSION = 11,
  EAR_ERR_TRUNCATED_FRAME = 12,
  EAR_ERR_CHECKSUM_MISMATCH = 13,
  EAR_ERR_INVALID_FIELD = 14,
  EAR_ERR_BAD_HEADER = 15,
  EAR_ERR_VERSION_MISMATCH = 16,
  EAR_ERR_CORRUPT_FRAME = 17,
  EAR_ERR_UNDEFINED_NORMALIZATION = 18,
  EAR_ERR_EMPTY_TEMPLATES = 19,
  EAR_ERR_SERIES_TOO_SHORT = 20,
  EAR_ERR_LABEL_MISMATCH = 21,
  EAR_ERR_IO = 22,
  EAR_ERR_BUFFER_TOO_SMALL = 98,
  EAR_ERR_NULL_ARGUMENT = 99,
  EAR_ERR_INTERNAL = 100
} ear_status;

/* Taxonomy name, e.g. "ChecksumMismatch". */
EAR_API const char* ear_status_name(ear_status status);
EAR_API const char* ear_last_error(void);
EAR_API const char* ear_version(void);

enum { EAR_FINGER_THUMB = 0, EAR_FINGER_INDEX = 1, EAR_FINGER_MIDDLE = 2 };
enum { EAR_FRAME_PRESSURE = 0, EAR_FRAME_STIMULUS_ECHO = 1, EAR_FRAME_CONTROL = 2 };
enum { EAR_SHAPE_CIRCLE = 0, EAR_SHAPE_TRIANGLE = 1, EAR_SHAPE_SQUARE = 2, EAR_SHAPE_HEXAGON = 3 };

/* ---- grids ------------------------------------------------------------- */

/* 2x2 mean filter; `out` receives (width-1)*(height-1) values. */
EAR_API ear_status ear_spatial_filter(const uint16_t* values, uint32_t width, uint32_t height, uint16_t* out,
                                      size_t out_len);

/* Row decimation onto the electrode lattice. `row_map` may be NULL for the
 * default 4x9 -> 4x5 mapping. */
EAR_API ear_status ear_resample_to_electrodes(const uint16_t* filtered, uint32_t width, uint32_t height,
                                              const uint32_t* row_map, size_t row_map_len, uint32_t target_width,
                                              uint32_t target_height, uint16_t* out, size_t out_len);

/* ---- intensity model --------------------------------------------------- */

typedef struct ear_model ear_model;

EAR_API ear_status ear_model_create(double a, double b, double k, ear_model** out);
EAR_API ear_status ear_model_load(const char* path, ear_model** out);
EAR_API ear_status ear_model_save(const ear_model* model, const char* path);
EAR_API void ear_model_destroy(ear_model* model);
EAR_API ear_status ear_model_params(const ear_model* model, double* a, double* b, double* k);
EAR_API ear_status ear_model_forward(const ear_model* model, double p, double* magnitude);
EAR_API ear_status ear_model_inverse(const ear_model* model, double magnitude, double* p, int* clamped);
EAR_API ear_status ear_model_pressure_to_probability(const ear_model* model, uint32_t cell, uint32_t max_count,
                                                     double deadzone_fraction, double* p);

#define EAR_MAX_FIT_LEVELS 32

typedef struct ear_fit_summary {
  double a;
  double b;
  double k;
  double residual;
  size_t sample_count;
  size_t level_count; /* levels beyond EAR_MAX_FIT_LEVELS are counted but not listed */
  double level_probability[EAR_MAX_FIT_LEVELS];
  double level_mean[EAR_MAX_FIT_LEVELS];
  size_t level_samples[EAR_MAX_FIT_LEVELS];
} ear_fit_summary;

EAR_API ear_status ear_fit_samples(const double* probabilities, const double* reported, size_t count,
                                   ear_model** out_model, ear_fit_summary* summary);

/* Fits a `probability,reported` CSV. Optional outputs may be NULL: the model
 * file (`a,b,k,residual`), the k scan trace (`k_candidate,residual`), the
 * fitted model handle and the summary. */
EAR_API ear_status ear_fit_csv(const char* csv_path, const char* model_out, const char* trace_out,
                               ear_model** out_model, ear_fit_summary* summary);

/* ---- pulse scheduling -------------------------------------------------- */

typedef struct ear_scheduler ear_scheduler;

EAR_API double ear_expected_rate(double p, double tick_rate_hz);
EAR_API ear_status ear_scheduler_create(uint64_t seed, double tick_rate_hz, uint32_t pulse_width_us,
                                        uint32_t width, uint32_t height, ear_scheduler** out);
EAR_API void ear_scheduler_destroy(ear_scheduler* scheduler);

/* Advances one tick. `probabilities` NULL holds the previous frame. Indices
 * of fired electrodes go to `fired` (row-major); `fired_count` always gets
 * the number fired. */
EAR_API ear_status ear_scheduler_step(ear_scheduler* scheduler, int finger, const double* probabilities,
                                      size_t count, uint32_t* fired, size_t fired_cap, size_t* fired_count,
                                      uint64_t* tick);
EAR_API ear_status ear_scheduler_rate(const ear_scheduler* scheduler, size_t electrode, double* rate_hz);

/* ---- wire frames ------------------------------------------------------- */

typedef struct ear_frame {
  uint8_t frame_type;
  uint8_t finger;
  uint32_t sequence;
  uint64_t tick;
  uint32_t width;
  uint32_t height;
  const uint32_t* values; /* width*height counts, each <= 65535 */
} ear_frame;

typedef struct ear_frame_header {
  uint8_t frame_type;
  uint8_t finger;
  uint32_t sequence;
  uint64_t tick;
  uint32_t width;
  uint32_t height;
} ear_frame_header;

EAR_API uint32_t ear_crc32(const uint8_t* bytes, size_t len);
EAR_API size_t ear_frame_encoded_size(uint32_t width, uint32_t height);

/* `written` receives the encoded length, also when the buffer is too small. */
EAR_API ear_status ear_frame_encode(const ear_frame* frame, uint8_t* buffer, size_t capacity, size_t* written);

/* Decodes the frame at the start of `bytes`; `values` receives width*height
 * counts and `consumed` the frame length. */
EAR_API ear_status ear_frame_decode(const uint8_t* bytes, size_t len, ear_frame_header* header, uint16_t* values,
                                    size_t values_cap, size_t* consumed);

/* ---- simulated link and leader session --------------------------------- */

typedef struct ear_link_model {
  uint64_t latency_ticks;
  uint64_t jitter_ticks;
  double loss_probability;
  double reorder_probability;
  uint64_t seed;
} ear_link_model;

typedef struct ear_link ear_link;
typedef void (*ear_delivery_fn)(const uint8_t* bytes, size_t len, uint64_t sent_tick, uint64_t delivery_tick,
                                void* user);

EAR_API void ear_link_model_default(ear_link_model* model);
EAR_API ear_status ear_link_create(const ear_link_model* model, ear_link** out);
EAR_API void ear_link_destroy(ear_link* link);
EAR_API ear_status ear_link_send(ear_link* link, const uint8_t* bytes, size_t len, uint64_t tick);
/* Invokes `deliver` for each frame due at or before `tick`, in delivery order. */
EAR_API ear_status ear_link_advance(ear_link* link, uint64_t tick, ear_delivery_fn deliver, void* user);

typedef struct ear_session_counters {
  uint64_t received;
  uint64_t handed_off;
  uint64_t gap_count;
  uint64_t stale_count;
  uint64_t out_of_order_count;
  uint64_t decode_errors;
} ear_session_counters;

typedef struct ear_leader ear_leader;

EAR_API ear_status ear_leader_create(ear_leader** out);
EAR_API void ear_leader_destroy(ear_leader* leader);
/* `handed_off` is set to 1 when the frame is fresh. Undecodable bytes count
 * as decode errors and are not reported as failures. */
EAR_API ear_status ear_leader_ingest(ear_leader* leader, const uint8_t* bytes, size_t len, int* handed_off);
EAR_API ear_status ear_leader_counters(const ear_leader* leader, ear_session_counters* out);

/* ---- stimulus generation and recordings -------------------------------- */

typedef struct ear_bar_options {
  int orientation_deg; /* 0, 45, 90, 135 */
  double thickness_sensels;
  uint16_t amplitude;
  uint64_t frames;
  int finger;
  uint64_t seed; /* recorded as metadata only; bars are noiseless */
} ear_bar_options;

typedef struct ear_scroll_options {
  int shape; /* EAR_SHAPE_* */
  uint32_t frames_per_cycle;
  uint32_t cycles;
  uint16_t amplitude;
  uint64_t seed;
} ear_scroll_options;

EAR_API void ear_bar_options_default(ear_bar_options* options);
EAR_API void ear_scroll_options_default(ear_scroll_options* options);

/* 5x10 sensor grid for one bar. */
EAR_API ear_status ear_generate_bar(int orientation_deg, double thickness_sensels, uint16_t amplitude,
                                    uint16_t* out, size_t out_len);
EAR_API ear_status ear_write_bar_recording(const ear_bar_options* options, const char* path,
                                           uint64_t* frames_written);
EAR_API ear_status ear_write_scroll_recording(const ear_scroll_options* options, const char* path,
                                              uint64_t* frames_written);

typedef struct ear_recording_info {
  uint32_t width;
  uint32_t height;
  uint32_t tick_rate;
  uint64_t frame_count;
  uint64_t first_tick;
  uint64_t last_tick;
  char kind[32];
  char label[64];
} ear_recording_info;

/* Reads a recording end to end, validating every frame. */
EAR_API ear_status ear_recording_info_read(const char* path, ear_recording_info* out);

/* ---- pipeline ---------------------------------------------------------- */

typedef struct ear_pipeline_options {
  uint64_t seed;
  int wall_clock;
  ear_link_model link; /* link.seed is ignored; trials derive their own */
  double a;
  double b;
  double k;
  double deadzone_fraction;
  uint32_t max_count;
  uint64_t window_ticks;
  uint32_t bin_ticks;
  uint32_t pulse_width_us;
  int write_pulse_logs;
} ear_pipeline_options;

typedef struct ear_trial_info {
  const char* recording;
  const char* truth;
  const char* predicted;
  int classified;
  double duration_s;
  double score;
  uint64_t pulses;
} ear_trial_info;

typedef struct ear_pipeline_result ear_pipeline_result;

EAR_API void ear_pipeline_options_default(ear_pipeline_options* options);
/* `out_dir` may be NULL to skip writing reports and pulse logs. */
EAR_API ear_status ear_pipeline_run(const ear_pipeline_options* options, const char* const* recordings, size_t count,
                                    const char* out_dir, ear_pipeline_result** out);
EAR_API void ear_pipeline_result_destroy(ear_pipeline_result* result);
EAR_API size_t ear_pipeline_result_trial_count(const ear_pipeline_result* result);
/* Strings stay valid until the result is destroyed. */
EAR_API ear_status ear_pipeline_result_trial(const ear_pipeline_result* result, size_t index, ear_trial_info* out);
EAR_API double ear_pipeline_result_accuracy(const ear_pipeline_result* result);

/* ---- analysis ---------------------------------------------------------- */

/* Tabulates a `true,predicted,duration_s` log and writes confusion.csv,
 * accuracy.csv and timing.csv. With `labels` NULL the class set is taken in
 * order of first appearance. */
EAR_API ear_status ear_analyze_trial_log(const char* trials_csv, const char* const* labels, size_t label_count,
                                         const char* out_dir, double* overall_accuracy);

/* ---- UDP --------------------------------------------------------------- */

typedef struct ear_udp_receiver ear_udp_receiver;

EAR_API ear_status ear_udp_stream_recording(const char* path, const char* host, uint16_t port, int wall_clock,
                                            uint64_t* sent);
/* Binds 127.0.0.1:port (0 picks a free port). */
EAR_API ear_status ear_udp_receiver_open(uint16_t port, ear_udp_receiver** out);
EAR_API void ear_udp_receiver_destroy(ear_udp_receiver* receiver);
EAR_API uint16_t ear_udp_receiver_port(const ear_udp_receiver* receiver);
/* Captures up to `max_frames` frames (0: until the link goes idle) into a
 * recording. Metadata is copied
 * from `meta_from` when it names a recording. */
EAR_API ear_status ear_udp_receiver_capture(ear_udp_receiver* receiver, const char* out_path, uint64_t max_frames,
                                            int idle_timeout_ms, const char* meta_from, uint64_t* written);

#ifdef __cplusplus
}
#endif

#endif /* ELECTROAR_H */

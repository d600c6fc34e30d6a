//! Tapped-delay-line vehicular fading channels.

mod fading;
mod presets;

pub use fading::{
    apply, max_delay_samples, realize, realize_and_apply, ChannelOptions, DelayMode, FadingRealization, NUM_SINUSOIDS,
    SINC_TAPS,
};
pub use presets::{
    all_presets, preset, read_tap_table, tap_records, write_tap_table, ChannelModel, FadingType, TapRecord, TapSpec,
    DEFAULT_MAX_DOPPLER_HZ, DEFAULT_SHIFTED_SPREAD_HZ, PRESET_NAMES,
};

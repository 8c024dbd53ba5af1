//! Variance profiles, random channel draws and the interference-alignment
//! precoding chain for every scheme.

mod ia_system;
mod precoding;
mod profile;
mod sample;

pub use ia_system::{sample_ia_system, IaSystemDraw};
pub use precoding::{
    build_ia_precoding, reference_vector, zero_forcing_filter, IAPrecodingSet, CONDITION_LIMIT,
};
pub use profile::{
    build_profile_ci_interference, build_profile_ia, build_profile_mjd, build_profile_rdma,
    ProfileKind, RdmaPart, VarianceProfile,
};
pub use sample::{sample_channel, ChannelRealization};

//! Network model: configuration, demand sampling and cache placement.

mod config;
mod demand;
mod placement;

pub use config::{
    zipf_distribution, CachingModel, DemandModel, NamedCaching, NamedDemand, NetworkConfig,
    NetworkConfigFile, PerUser,
};
pub use demand::{sample_demands, sample_requests, DemandRealization};
pub use placement::{apportion, lfu_place, popularity_order, rap_place, CacheRealization, PacketId};

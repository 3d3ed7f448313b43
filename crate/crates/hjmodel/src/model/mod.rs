//! Shared domain types and the basic model operations: CES unit cost,
//! profitability loading of discrete capacity distributions, and numeric
//! Young / profit-production transforms on grids.

mod ces;
mod fenchel;
mod measure;

pub use ces::{
    ces_unit_cost, gnp_load, gnp_load_generalized, CesParams, GnpLoad, GnpLoadGeneralized,
    UnitCost,
};
pub use fenchel::{
    log_axis,
    fenchel_production_from_profit, fenchel_profit_from_production, young_transform,
    FenchelValue, GridFunction, PriceSearchGrid,
};
pub use measure::DiscreteMeasure;

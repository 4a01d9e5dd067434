//! Builders for auctions and the pricing game.

mod auction;
mod family;
mod pricing;

use serde::{Deserialize, Serialize};

pub use auction::{build_auction, build_lo_auction, AuctionPrior, AuctionSpec, LoAuctionSpec, PriceRule};
pub use family::{scaled, FamilySpec, PricingField, ScaleRule};
pub use pricing::{build_pricing_game, build_pricing_game_unchecked, PricingSpec};

use crate::error::Result;
use crate::game::GameSpec;

/// A game given by a builder and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Auction(AuctionSpec),
    LoAuction(LoAuctionSpec),
    Pricing(PricingSpec),
}

impl ModelSpec {
    pub fn build(&self) -> Result<GameSpec> {
        match self {
            ModelSpec::Auction(s) => build_auction(s),
            ModelSpec::LoAuction(s) => build_lo_auction(s),
            ModelSpec::Pricing(s) => build_pricing_game(s),
        }
    }
}

"""Model-free no-arbitrage checks for CDS term structures."""

from __future__ import annotations

from .aoa_checks import (
    DEFAULT_PAIRS,
    AoAVerdict,
    Condition,
    HyperbolaPlot,
    Violation,
    check_irs_corollary,
    check_thm1_curve,
    check_thm1_pair,
    check_thm2_curve,
    check_thm3_curve,
    hyperbola_plot_data,
    mar,
)
from .annuity import (
    defaultable_annuity,
    discrete_annuity,
    discrete_defaultable_annuity,
    irs_fair_rate,
    standardized_annuity,
)
from .curve_model import (
    BP,
    CANONICAL_TENORS,
    DEFAULT_RECOVERY,
    CdsCurve,
    CdsQuote,
    DiscountCurve,
    EntityMeta,
    PaymentSchedule,
    QuoteKind,
    Rating,
    RecoverySpec,
    Region,
    Sector,
    Seniority,
    Tenor,
    discount_factor,
)
from .errors import (
    BootstrapError,
    CdsAnalyticsError,
    DegenerateCurveError,
    DomainError,
    DuplicateQuoteError,
    ExtrapolationError,
    InvalidCurveError,
    SchemaError,
    UsageError,
)
from .irs_bridge import (
    IrsForwardCurve,
    check_irs_cds_aoa,
    forward_bond_from_irs,
    forward_rate_from_irs,
    phi,
)
from .scanner import (
    AnomalyRecord,
    CurveTable,
    ScanReport,
    aggregate_monthly,
    emit_report,
    ingest_csv,
    mar_stats_by_group,
    read_quotes,
    scan,
)
from .strategy import (
    CdsPosition,
    Direction,
    PairedTrade,
    cds_mtm,
    cr01,
    dv01,
    paired_trade_mtm,
    three_period_fair_spreads,
    three_period_payoff,
)
from .survival import (
    SurvivalCurve,
    bootstrap_hazards,
    conditional_default_prob,
    fair_spread_continuous,
    fair_spread_discrete,
    protection_leg,
    survival_prob,
)

__all__ = [name for name in dir() if not name.startswith("_")]

"""Declarative scenario schema: loading, validation, canonical serialization.

Documents are JSON (UTF-8). Amounts are decimal strings, never numbers;
rationals are "num/den" strings. Canonical form sorts every collection by
its natural key, sorts object keys, indents two spaces, and ends with a
newline, so load -> serialize -> load is a byte-stable fixed point.
Validation is complete at load time: the engine never re-checks
cross-references.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping, Optional

from .actions import (
    Action,
    ActionSpaceSpec,
    AmountInterval,
    KIND_ARB,
    KIND_BRIDGE,
    KIND_PENDING,
    KIND_SWAP,
)
from .engine import DEFAULT_MAX_SEQUENCE_LENGTH, MevQuery
from .errors import ParseError, ValidationError
from .fixedpoint import Amount, format_fraction, parse_fraction
from .model import ACTION_KINDS, PriceMatrix, Player, Registry, WorldState, check_id
from .venues import (
    ArbLegEffect,
    BridgeSpec,
    ConstantProductPool,
    CpSwapEffect,
    DIRECTIONS,
    LegOpportunity,
    PendingTx,
    PricePushEffect,
    StylizedArbSpec,
    StylizedMidpointPool,
    TransferEffect,
)

SCHEMA_VERSION = 1

_TOP_LEVEL_KEYS = {
    "schema_version",
    "domains",
    "assets",
    "players",
    "pools",
    "bridges",
    "mempool",
    "opportunities",
    "stylized_arbs",
    "actions",
    "prices",
    "defaults",
}


@dataclass(frozen=True)
class DomainDecl:
    id: str
    native_asset: str


@dataclass(frozen=True)
class BalanceDecl:
    domain: str
    asset: str
    amount: Amount


@dataclass(frozen=True)
class PlayerDecl:
    id: str
    balances: tuple[BalanceDecl, ...]
    capabilities: Mapping[str, frozenset[str]]


@dataclass(frozen=True)
class Defaults:
    player: str
    base_domain: str
    base_asset: str
    max_sequence_length: int
    alpha: Amount
    action_domains: tuple[str, ...]
    value_domains: tuple[str, ...]


class Scenario:
    """A fully validated scenario; immutable after construction."""

    def __init__(
        self,
        schema_version: int,
        domains: tuple[DomainDecl, ...],
        assets: tuple[str, ...],
        players: tuple[PlayerDecl, ...],
        pools: tuple[object, ...],
        bridges: tuple[BridgeSpec, ...],
        mempool: tuple[PendingTx, ...],
        opportunities: tuple[LegOpportunity, ...],
        stylized_arbs: tuple[StylizedArbSpec, ...],
        player_actions: tuple[tuple[str, Action], ...],
        prices: PriceMatrix,
        defaults: Defaults,
    ):
        self.schema_version = schema_version
        self.domains = domains
        self.assets = assets
        self.players = players
        self.pools = pools
        self.bridges = bridges
        self.mempool = mempool
        self.opportunities = opportunities
        self.stylized_arbs = stylized_arbs
        self.player_actions = player_actions
        self.prices = prices
        self.defaults = defaults
        self.registry = Registry(
            native_assets={d.id: d.native_asset for d in domains},
            players=frozenset(p.id for p in players),
            assets=frozenset(assets),
            pool_ids=frozenset(p.id for p in pools),
        )
        self.space = _build_space(self)

    def initial_state(self) -> WorldState:
        balances = {}
        for player in self.players:
            for bal in player.balances:
                key = (bal.domain, player.id, bal.asset)
                existing = balances.get(key)
                balances[key] = bal.amount if existing is None else existing + bal.amount
        pools = {pool.id: pool for pool in self.pools}
        return WorldState(self.registry, balances, pools)

    def default_query(
        self,
        player: Optional[str] = None,
        action_domains=None,
        value_domains=None,
        base_domain: Optional[str] = None,
        base_asset: Optional[str] = None,
        max_len: Optional[int] = None,
    ) -> MevQuery:
        d = self.defaults
        return MevQuery(
            player=player or d.player,
            action_domains=frozenset(action_domains or d.action_domains),
            value_domains=tuple(value_domains or d.value_domains),
            base_domain=base_domain or d.base_domain,
            base_asset=base_asset or d.base_asset,
            prices=self.prices,
            max_sequence_length=d.max_sequence_length if max_len is None else max_len,
        )


# -- parsing helpers ------------------------------------------------------------


def _require(obj: dict, field: str, path: str):
    if field not in obj:
        raise ValidationError(f"{path}.{field}", "missing required field")
    return obj[field]


def _expect_str(value, path: str) -> str:
    if not isinstance(value, str):
        raise ValidationError(path, f"expected string, got {type(value).__name__}")
    return value


def _expect_list(value, path: str) -> list:
    if not isinstance(value, list):
        raise ValidationError(path, f"expected list, got {type(value).__name__}")
    return value


def _expect_dict(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ValidationError(path, f"expected object, got {type(value).__name__}")
    return value


def _expect_int(value, path: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValidationError(path, f"expected integer, got {type(value).__name__}")
    return value


def _amount(value, path: str, minimum: Optional[Amount] = None) -> Amount:
    text = _expect_str(value, path)
    try:
        amount = Amount(text)
    except ValueError as exc:
        raise ValidationError(path, str(exc)) from None
    if minimum is not None and amount < minimum:
        raise ValidationError(path, f"amount {amount} below minimum {minimum}")
    return amount


def _fraction(value, path: str):
    text = _expect_str(value, path)
    try:
        ratio = parse_fraction(text)
    except ValueError as exc:
        raise ValidationError(path, str(exc)) from None
    if ratio <= 0:
        raise ValidationError(path, "rate must be positive")
    return ratio


def _unique(seen: set, value: str, path: str, what: str):
    if value in seen:
        raise ValidationError(path, f"duplicate {what} {value!r}")
    seen.add(value)


# -- loading ---------------------------------------------------------------------


def loads(text: str) -> Scenario:
    """Parse and fully validate a scenario document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"malformed document at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    return _from_object(doc)


def load_path(path: str | Path) -> Scenario:
    return loads(Path(path).read_text(encoding="utf-8"))


def load_scenario(source: str | Path) -> Scenario:
    """Load from a path, or parse directly when given document text."""
    if isinstance(source, Path):
        return load_path(source)
    if source.lstrip().startswith("{"):
        return loads(source)
    return load_path(source)


def _from_object(doc) -> Scenario:
    root = _expect_dict(doc, "document")
    unknown = set(root) - _TOP_LEVEL_KEYS
    if unknown:
        raise ValidationError(sorted(unknown)[0], "unknown top-level field")
    version = _expect_int(_require(root, "schema_version", "document"), "schema_version")
    if version != SCHEMA_VERSION:
        raise ValidationError("schema_version", f"unsupported version {version}")

    # domains and assets come first; everything else resolves against them
    assets: list[str] = []
    seen_assets: set[str] = set()
    for idx, entry in enumerate(_expect_list(_require(root, "assets", "document"), "assets")):
        path = f"assets[{idx}]"
        asset = check_id(_expect_str(entry, path), path)
        _unique(seen_assets, asset, path, "asset")
        assets.append(asset)

    domains: list[DomainDecl] = []
    seen_domains: set[str] = set()
    domain_entries = _expect_list(_require(root, "domains", "document"), "domains")
    if not domain_entries:
        raise ValidationError("domains", "at least one domain is required")
    for idx, entry in enumerate(domain_entries):
        path = f"domains[{idx}]"
        entry = _expect_dict(entry, path)
        did = check_id(_expect_str(_require(entry, "id", path), f"{path}.id"), f"{path}.id")
        _unique(seen_domains, did, f"{path}.id", "domain")
        native = _expect_str(_require(entry, "native_asset", path), f"{path}.native_asset")
        if native not in seen_assets:
            raise ValidationError(f"{path}.native_asset", f"undeclared asset {native!r}")
        domains.append(DomainDecl(did, native))

    players: list[PlayerDecl] = []
    seen_players: set[str] = set()
    for idx, entry in enumerate(_expect_list(_require(root, "players", "document"), "players")):
        path = f"players[{idx}]"
        entry = _expect_dict(entry, path)
        pid = check_id(_expect_str(_require(entry, "id", path), f"{path}.id"), f"{path}.id")
        _unique(seen_players, pid, f"{path}.id", "player")
        balances = []
        for b_idx, bal in enumerate(_expect_list(entry.get("balances", []), f"{path}.balances")):
            b_path = f"{path}.balances[{b_idx}]"
            bal = _expect_dict(bal, b_path)
            domain = _expect_str(_require(bal, "domain", b_path), f"{b_path}.domain")
            if domain not in seen_domains:
                raise ValidationError(f"{b_path}.domain", f"undeclared domain {domain!r}")
            asset = _expect_str(_require(bal, "asset", b_path), f"{b_path}.asset")
            if asset not in seen_assets:
                raise ValidationError(f"{b_path}.asset", f"undeclared asset {asset!r}")
            amount = _amount(_require(bal, "amount", b_path), f"{b_path}.amount", Amount(0))
            balances.append(BalanceDecl(domain, asset, amount))
        capabilities: dict[str, frozenset[str]] = {}
        for c_idx, cap in enumerate(
            _expect_list(entry.get("capabilities", []), f"{path}.capabilities")
        ):
            c_path = f"{path}.capabilities[{c_idx}]"
            cap = _expect_dict(cap, c_path)
            domain = _expect_str(_require(cap, "domain", c_path), f"{c_path}.domain")
            if domain not in seen_domains:
                raise ValidationError(f"{c_path}.domain", f"undeclared domain {domain!r}")
            if domain in capabilities:
                raise ValidationError(f"{c_path}.domain", f"duplicate capability domain {domain!r}")
            kinds = []
            for k_idx, kind in enumerate(_expect_list(_require(cap, "kinds", c_path), f"{c_path}.kinds")):
                kind = _expect_str(kind, f"{c_path}.kinds[{k_idx}]")
                if kind not in ACTION_KINDS:
                    raise ValidationError(f"{c_path}.kinds[{k_idx}]", f"unknown action kind {kind!r}")
                kinds.append(kind)
            capabilities[domain] = frozenset(kinds)
        players.append(PlayerDecl(pid, tuple(balances), capabilities))

    pools: list[object] = []
    pool_by_id: dict[str, object] = {}
    for idx, entry in enumerate(_expect_list(root.get("pools", []), "pools")):
        path = f"pools[{idx}]"
        entry = _expect_dict(entry, path)
        pool_id = check_id(_expect_str(_require(entry, "id", path), f"{path}.id"), f"{path}.id")
        if pool_id in pool_by_id:
            raise ValidationError(f"{path}.id", f"duplicate pool {pool_id!r}")
        domain = _expect_str(_require(entry, "domain", path), f"{path}.domain")
        if domain not in seen_domains:
            raise ValidationError(f"{path}.domain", f"undeclared domain {domain!r}")
        asset_x = _expect_str(_require(entry, "asset_x", path), f"{path}.asset_x")
        asset_y = _expect_str(_require(entry, "asset_y", path), f"{path}.asset_y")
        for field_name, asset in (("asset_x", asset_x), ("asset_y", asset_y)):
            if asset not in seen_assets:
                raise ValidationError(f"{path}.{field_name}", f"undeclared asset {asset!r}")
        if asset_x == asset_y:
            raise ValidationError(f"{path}.asset_y", "pool assets must differ")
        pool_type = _expect_str(_require(entry, "type", path), f"{path}.type")
        if pool_type == "constant_product":
            fee = _expect_int(entry.get("fee_bps", 0), f"{path}.fee_bps")
            if not 0 <= fee < 10_000:
                raise ValidationError(f"{path}.fee_bps", "fee_bps must lie in [0, 10000)")
            pool = ConstantProductPool(
                id=pool_id,
                domain=domain,
                asset_x=asset_x,
                asset_y=asset_y,
                reserve_x=_amount(_require(entry, "reserve_x", path), f"{path}.reserve_x"),
                reserve_y=_amount(_require(entry, "reserve_y", path), f"{path}.reserve_y"),
                fee_bps=fee,
            )
            if pool.reserve_x.units <= 0 or pool.reserve_y.units <= 0:
                raise ValidationError(f"{path}.reserve_x", "reserves must be positive")
        elif pool_type == "stylized_midpoint":
            price = _amount(_require(entry, "price", path), f"{path}.price")
            if price.units <= 0:
                raise ValidationError(f"{path}.price", "price must be positive")
            pool = StylizedMidpointPool(
                id=pool_id, domain=domain, asset_x=asset_x, asset_y=asset_y, price=price
            )
        else:
            raise ValidationError(f"{path}.type", f"unknown pool type {pool_type!r}")
        pools.append(pool)
        pool_by_id[pool_id] = pool

    bridges: list[BridgeSpec] = []
    bridge_by_id: dict[str, BridgeSpec] = {}
    for idx, entry in enumerate(_expect_list(root.get("bridges", []), "bridges")):
        path = f"bridges[{idx}]"
        entry = _expect_dict(entry, path)
        bid = check_id(_expect_str(_require(entry, "id", path), f"{path}.id"), f"{path}.id")
        if bid in bridge_by_id:
            raise ValidationError(f"{path}.id", f"duplicate bridge {bid!r}")
        fields = {}
        for field_name in ("from_domain", "to_domain"):
            value = _expect_str(_require(entry, field_name, path), f"{path}.{field_name}")
            if value not in seen_domains:
                raise ValidationError(f"{path}.{field_name}", f"undeclared domain {value!r}")
            fields[field_name] = value
        for field_name in ("from_asset", "to_asset"):
            value = _expect_str(_require(entry, field_name, path), f"{path}.{field_name}")
            if value not in seen_assets:
                raise ValidationError(f"{path}.{field_name}", f"undeclared asset {value!r}")
            fields[field_name] = value
        bridge = BridgeSpec(
            id=bid,
            rate=_fraction(_require(entry, "rate", path), f"{path}.rate"),
            flat_fee=_amount(entry.get("flat_fee", "0"), f"{path}.flat_fee", Amount(0)),
            **fields,
        )
        bridges.append(bridge)
        bridge_by_id[bid] = bridge

    # opportunities parse before mempool so legs can resolve
    opportunities: list[LegOpportunity] = []
    opp_raw: dict[str, tuple[LegOpportunity, str]] = {}
    for idx, entry in enumerate(_expect_list(root.get("opportunities", []), "opportunities")):
        path = f"opportunities[{idx}]"
        entry = _expect_dict(entry, path)
        oid = check_id(_expect_str(_require(entry, "id", path), f"{path}.id"), f"{path}.id")
        if oid in opp_raw:
            raise ValidationError(f"{path}.id", f"duplicate opportunity {oid!r}")
        beneficiary = _expect_str(_require(entry, "beneficiary", path), f"{path}.beneficiary")
        if beneficiary not in seen_players:
            raise ValidationError(f"{path}.beneficiary", f"undeclared player {beneficiary!r}")
        profit_domain = _expect_str(_require(entry, "profit_domain", path), f"{path}.profit_domain")
        if profit_domain not in seen_domains:
            raise ValidationError(f"{path}.profit_domain", f"undeclared domain {profit_domain!r}")
        profit_asset = _expect_str(_require(entry, "profit_asset", path), f"{path}.profit_asset")
        if profit_asset not in seen_assets:
            raise ValidationError(f"{path}.profit_asset", f"undeclared asset {profit_asset!r}")
        legs = tuple(
            _expect_str(leg, f"{path}.legs[{l_idx}]")
            for l_idx, leg in enumerate(_expect_list(_require(entry, "legs", path), f"{path}.legs"))
        )
        if len(legs) < 2:
            raise ValidationError(f"{path}.legs", "an opportunity needs at least two legs")
        if len(set(legs)) != len(legs):
            raise ValidationError(f"{path}.legs", "legs must be distinct")
        opp = LegOpportunity(
            id=oid,
            beneficiary=beneficiary,
            declared_profit=_amount(
                _require(entry, "declared_profit", path), f"{path}.declared_profit", Amount(0)
            ),
            profit_asset=profit_asset,
            profit_domain=profit_domain,
            leg_ids=legs,
        )
        opportunities.append(opp)
        opp_raw[oid] = (opp, path)

    action_ids: set[str] = set()
    mempool: list[PendingTx] = []
    legs_seen: dict[str, set[str]] = {oid: set() for oid in opp_raw}
    for idx, entry in enumerate(_expect_list(root.get("mempool", []), "mempool")):
        path = f"mempool[{idx}]"
        entry = _expect_dict(entry, path)
        tid = check_id(_expect_str(_require(entry, "id", path), f"{path}.id"), f"{path}.id")
        _unique(action_ids, tid, f"{path}.id", "action id")
        domain = _expect_str(_require(entry, "domain", path), f"{path}.domain")
        if domain not in seen_domains:
            raise ValidationError(f"{path}.domain", f"undeclared domain {domain!r}")
        effect_obj = _expect_dict(_require(entry, "effect", path), f"{path}.effect")
        e_path = f"{path}.effect"
        e_type = _expect_str(_require(effect_obj, "type", e_path), f"{e_path}.type")
        if e_type == "price_push":
            pool = _resolve_stylized(pool_by_id, effect_obj, e_path, domain)
            effect = PricePushEffect(
                pool_id=pool.id,
                to_price=_amount(_require(effect_obj, "to_price", e_path), f"{e_path}.to_price"),
            )
        elif e_type == "cp_swap":
            pool_id = _expect_str(_require(effect_obj, "pool", e_path), f"{e_path}.pool")
            pool = pool_by_id.get(pool_id)
            if not isinstance(pool, ConstantProductPool):
                raise ValidationError(f"{e_path}.pool", f"{pool_id!r} is not a constant-product pool")
            if pool.domain != domain:
                raise ValidationError(f"{e_path}.pool", f"pool {pool_id!r} lives on {pool.domain!r}")
            direction = _expect_str(_require(effect_obj, "direction", e_path), f"{e_path}.direction")
            if direction not in DIRECTIONS:
                raise ValidationError(f"{e_path}.direction", f"unknown direction {direction!r}")
            account = _expect_str(_require(effect_obj, "account", e_path), f"{e_path}.account")
            if account not in seen_players:
                raise ValidationError(f"{e_path}.account", f"undeclared player {account!r}")
            effect = CpSwapEffect(
                pool_id=pool_id,
                direction=direction,
                amount_in=_amount(_require(effect_obj, "amount_in", e_path), f"{e_path}.amount_in"),
                account=account,
            )
        elif e_type == "transfer":
            for field_name in ("from_account", "to_account"):
                account = _expect_str(_require(effect_obj, field_name, e_path), f"{e_path}.{field_name}")
                if account not in seen_players:
                    raise ValidationError(f"{e_path}.{field_name}", f"undeclared player {account!r}")
            asset = _expect_str(_require(effect_obj, "asset", e_path), f"{e_path}.asset")
            if asset not in seen_assets:
                raise ValidationError(f"{e_path}.asset", f"undeclared asset {asset!r}")
            effect = TransferEffect(
                domain=domain,
                from_account=effect_obj["from_account"],
                to_account=effect_obj["to_account"],
                asset=asset,
                amount=_amount(_require(effect_obj, "amount", e_path), f"{e_path}.amount", Amount(0)),
            )
        elif e_type == "arb_leg":
            pool = _resolve_stylized(pool_by_id, effect_obj, e_path, domain)
            opp_id = _expect_str(_require(effect_obj, "opportunity", e_path), f"{e_path}.opportunity")
            if opp_id not in opp_raw:
                raise ValidationError(f"{e_path}.opportunity", f"undeclared opportunity {opp_id!r}")
            opp = opp_raw[opp_id][0]
            if tid not in opp.leg_ids:
                raise ValidationError(
                    f"{e_path}.opportunity", f"tx {tid!r} is not a declared leg of {opp_id!r}"
                )
            legs_seen[opp_id].add(tid)
            effect = ArbLegEffect(
                pool_id=pool.id,
                from_price=_amount(_require(effect_obj, "from_price", e_path), f"{e_path}.from_price"),
                to_price=_amount(_require(effect_obj, "to_price", e_path), f"{e_path}.to_price"),
                opportunity=opp,
            )
        else:
            raise ValidationError(f"{e_path}.type", f"unknown effect type {e_type!r}")
        mempool.append(PendingTx(id=tid, domain=domain, effect=effect))

    for oid, (opp, path) in opp_raw.items():
        missing = set(opp.leg_ids) - legs_seen[oid]
        if missing:
            raise ValidationError(
                f"{path}.legs", f"legs not present in the mempool: {sorted(missing)}"
            )

    arbs: list[StylizedArbSpec] = []
    arb_by_id: dict[str, StylizedArbSpec] = {}
    for idx, entry in enumerate(_expect_list(root.get("stylized_arbs", []), "stylized_arbs")):
        path = f"stylized_arbs[{idx}]"
        entry = _expect_dict(entry, path)
        aid = check_id(_expect_str(_require(entry, "id", path), f"{path}.id"), f"{path}.id")
        if aid in arb_by_id:
            raise ValidationError(f"{path}.id", f"duplicate stylized arb {aid!r}")
        sides = {}
        for field_name in ("pool_a", "pool_b"):
            pool_id = _expect_str(_require(entry, field_name, path), f"{path}.{field_name}")
            pool = pool_by_id.get(pool_id)
            if not isinstance(pool, StylizedMidpointPool):
                raise ValidationError(f"{path}.{field_name}", f"{pool_id!r} is not a stylized pool")
            sides[field_name] = pool
        pa, pb = sides["pool_a"], sides["pool_b"]
        if pa.id == pb.id:
            raise ValidationError(f"{path}.pool_b", "pools must differ")
        if (pa.asset_x, pa.asset_y) != (pb.asset_x, pb.asset_y):
            raise ValidationError(f"{path}.pool_b", "pools must share the same asset pair")
        profit_domain = _expect_str(_require(entry, "profit_domain", path), f"{path}.profit_domain")
        if profit_domain not in seen_domains:
            raise ValidationError(f"{path}.profit_domain", f"undeclared domain {profit_domain!r}")
        profit_asset = _expect_str(_require(entry, "profit_asset", path), f"{path}.profit_asset")
        if profit_asset not in seen_assets:
            raise ValidationError(f"{path}.profit_asset", f"undeclared asset {profit_asset!r}")
        arb = StylizedArbSpec(
            id=aid,
            pool_a=pa.id,
            pool_b=pb.id,
            declared_profit=_amount(
                _require(entry, "declared_profit", path), f"{path}.declared_profit", Amount(0)
            ),
            profit_asset=profit_asset,
            profit_domain=profit_domain,
        )
        arbs.append(arb)
        arb_by_id[aid] = arb

    player_decl_by_id = {p.id: p for p in players}
    player_actions: list[tuple[str, Action]] = []
    for idx, entry in enumerate(_expect_list(root.get("actions", []), "actions")):
        path = f"actions[{idx}]"
        entry = _expect_dict(entry, path)
        aid = check_id(_expect_str(_require(entry, "id", path), f"{path}.id"), f"{path}.id")
        _unique(action_ids, aid, f"{path}.id", "action id")
        owner = _expect_str(_require(entry, "player", path), f"{path}.player")
        if owner not in seen_players:
            raise ValidationError(f"{path}.player", f"undeclared player {owner!r}")
        kind = _expect_str(_require(entry, "kind", path), f"{path}.kind")
        if kind == KIND_PENDING:
            raise ValidationError(f"{path}.kind", "pending transactions belong in the mempool")
        if kind not in ACTION_KINDS:
            raise ValidationError(f"{path}.kind", f"unknown action kind {kind!r}")

        amount_mode = entry.get("amount")
        fixed = interval = None
        sweep = False
        if amount_mode is not None:
            a_path = f"{path}.amount"
            if amount_mode == "all":
                sweep = True
            elif isinstance(amount_mode, dict) and set(amount_mode) == {"fixed"}:
                fixed = _amount(amount_mode["fixed"], f"{a_path}.fixed")
                if fixed.units <= 0:
                    raise ValidationError(f"{a_path}.fixed", "fixed amount must be positive")
            elif isinstance(amount_mode, dict) and set(amount_mode) == {"interval"}:
                bounds = _expect_list(amount_mode["interval"], f"{a_path}.interval")
                if len(bounds) != 2:
                    raise ValidationError(f"{a_path}.interval", "interval needs [lo, hi]")
                lo = _amount(bounds[0], f"{a_path}.interval[0]", Amount(0))
                hi = _amount(bounds[1], f"{a_path}.interval[1]")
                if hi <= lo:
                    raise ValidationError(f"{a_path}.interval[1]", "hi must exceed lo")
                interval = AmountInterval(lo, hi)
            else:
                raise ValidationError(a_path, "expected \"all\", {\"fixed\": ...} or {\"interval\": [lo, hi]}")

        if kind == KIND_SWAP:
            pool_id = _expect_str(_require(entry, "pool", path), f"{path}.pool")
            pool = pool_by_id.get(pool_id)
            if pool is None:
                raise ValidationError(f"{path}.pool", f"undeclared pool {pool_id!r}")
            direction = _expect_str(_require(entry, "direction", path), f"{path}.direction")
            if direction not in DIRECTIONS:
                raise ValidationError(f"{path}.direction", f"unknown direction {direction!r}")
            if fixed is None and interval is None and not sweep:
                raise ValidationError(f"{path}.amount", "swap actions need an amount mode")
            action = Action(
                id=aid,
                kind=kind,
                domains=frozenset({pool.domain}),
                pool_id=pool_id,
                direction=direction,
                amount=fixed,
                interval=interval,
                sweep=sweep,
            )
        elif kind == KIND_BRIDGE:
            bridge_id = _expect_str(_require(entry, "bridge", path), f"{path}.bridge")
            bridge = bridge_by_id.get(bridge_id)
            if bridge is None:
                raise ValidationError(f"{path}.bridge", f"undeclared bridge {bridge_id!r}")
            if fixed is None and interval is None and not sweep:
                raise ValidationError(f"{path}.amount", "bridge actions need an amount mode")
            action = Action(
                id=aid,
                kind=kind,
                domains=frozenset({bridge.from_domain, bridge.to_domain}),
                bridge=bridge,
                amount=fixed,
                interval=interval,
                sweep=sweep,
            )
        else:  # StylizedArb
            if amount_mode is not None:
                raise ValidationError(f"{path}.amount", "stylized arbs take no amount")
            arb_id = _expect_str(_require(entry, "arb", path), f"{path}.arb")
            arb = arb_by_id.get(arb_id)
            if arb is None:
                raise ValidationError(f"{path}.arb", f"undeclared stylized arb {arb_id!r}")
            domains_touched = frozenset(
                {pool_by_id[arb.pool_a].domain, pool_by_id[arb.pool_b].domain}
            )
            action = Action(id=aid, kind=kind, domains=domains_touched, arb=arb)

        decl = player_decl_by_id[owner]
        for domain in sorted(action.domains):
            if kind not in decl.capabilities.get(domain, frozenset()):
                raise ValidationError(
                    f"{path}.kind", f"player {owner!r} lacks {kind} capability on {domain!r}"
                )
        player_actions.append((owner, action))

    prices = PriceMatrix()
    for idx, entry in enumerate(_expect_list(root.get("prices", []), "prices")):
        path = f"prices[{idx}]"
        entry = _expect_dict(entry, path)
        src = _expect_str(_require(entry, "from", path), f"{path}.from")
        dst = _expect_str(_require(entry, "to", path), f"{path}.to")
        for field_name, asset in (("from", src), ("to", dst)):
            if asset not in seen_assets:
                raise ValidationError(f"{path}.{field_name}", f"undeclared asset {asset!r}")
        try:
            prices.declare(src, dst, _fraction(_require(entry, "rate", path), f"{path}.rate"))
        except ValidationError as exc:
            raise ValidationError(f"{path}.rate", str(exc)) from None

    defaults_obj = _expect_dict(_require(root, "defaults", "document"), "defaults")
    d_player = _expect_str(_require(defaults_obj, "player", "defaults"), "defaults.player")
    if d_player not in seen_players:
        raise ValidationError("defaults.player", f"undeclared player {d_player!r}")
    d_base_domain = _expect_str(
        _require(defaults_obj, "base_domain", "defaults"), "defaults.base_domain"
    )
    if d_base_domain not in seen_domains:
        raise ValidationError("defaults.base_domain", f"undeclared domain {d_base_domain!r}")
    d_base_asset = _expect_str(
        _require(defaults_obj, "base_asset", "defaults"), "defaults.base_asset"
    )
    if d_base_asset not in seen_assets:
        raise ValidationError("defaults.base_asset", f"undeclared asset {d_base_asset!r}")
    max_len = _expect_int(
        defaults_obj.get("max_sequence_length", DEFAULT_MAX_SEQUENCE_LENGTH),
        "defaults.max_sequence_length",
    )
    if max_len < 0:
        raise ValidationError("defaults.max_sequence_length", "must be >= 0")
    alpha = _amount(defaults_obj.get("alpha", "0"), "defaults.alpha", Amount(0))

    def domain_list(field_name: str) -> tuple[str, ...]:
        raw = defaults_obj.get(field_name)
        if raw is None:
            return tuple(d.id for d in domains)
        values = []
        for i, value in enumerate(_expect_list(raw, f"defaults.{field_name}")):
            value = _expect_str(value, f"defaults.{field_name}[{i}]")
            if value not in seen_domains:
                raise ValidationError(f"defaults.{field_name}[{i}]", f"undeclared domain {value!r}")
            if value in values:
                raise ValidationError(f"defaults.{field_name}[{i}]", f"repeated domain {value!r}")
            values.append(value)
        if not values:
            raise ValidationError(f"defaults.{field_name}", "must be nonempty")
        return tuple(values)

    defaults = Defaults(
        player=d_player,
        base_domain=d_base_domain,
        base_asset=d_base_asset,
        max_sequence_length=max_len,
        alpha=alpha,
        action_domains=domain_list("action_domains"),
        value_domains=domain_list("value_domains"),
    )

    # every domain's measurement asset must price into the default base
    for domain in domains:
        if not prices.has_rate(domain.native_asset, defaults.base_asset):
            raise ValidationError(
                "prices",
                f"no rate from native asset {domain.native_asset!r} of domain "
                f"{domain.id!r} to base asset {defaults.base_asset!r}",
            )

    return Scenario(
        schema_version=version,
        domains=tuple(domains),
        assets=tuple(assets),
        players=tuple(players),
        pools=tuple(pools),
        bridges=tuple(bridges),
        mempool=tuple(mempool),
        opportunities=tuple(opportunities),
        stylized_arbs=tuple(arbs),
        player_actions=tuple(player_actions),
        prices=prices,
        defaults=defaults,
    )


def _resolve_stylized(pool_by_id, effect_obj, e_path, domain) -> StylizedMidpointPool:
    pool_id = _expect_str(_require(effect_obj, "pool", e_path), f"{e_path}.pool")
    pool = pool_by_id.get(pool_id)
    if not isinstance(pool, StylizedMidpointPool):
        raise ValidationError(f"{e_path}.pool", f"{pool_id!r} is not a stylized pool")
    if pool.domain != domain:
        raise ValidationError(f"{e_path}.pool", f"pool {pool_id!r} lives on {pool.domain!r}")
    return pool


def _build_space(scenario: Scenario) -> ActionSpaceSpec:
    by_player: dict[str, list[Action]] = {p.id: [] for p in scenario.players}
    for owner, action in scenario.player_actions:
        by_player[owner].append(action)
    for tx in scenario.mempool:
        for player in scenario.players:
            if KIND_PENDING in player.capabilities.get(tx.domain, frozenset()):
                by_player[player.id].append(
                    Action(
                        id=tx.id,
                        kind=KIND_PENDING,
                        domains=frozenset({tx.domain}),
                        tx=tx,
                    )
                )
    return ActionSpaceSpec(by_player)


# -- canonical serialization -------------------------------------------------------


def _amount_mode_obj(action: Action):
    if action.sweep:
        return "all"
    if action.amount is not None:
        return {"fixed": str(action.amount)}
    if action.interval is not None:
        return {"interval": [str(action.interval.lo), str(action.interval.hi)]}
    return None


def _effect_obj(effect) -> dict:
    if isinstance(effect, PricePushEffect):
        return {"type": "price_push", "pool": effect.pool_id, "to_price": str(effect.to_price)}
    if isinstance(effect, CpSwapEffect):
        return {
            "type": "cp_swap",
            "pool": effect.pool_id,
            "direction": effect.direction,
            "amount_in": str(effect.amount_in),
            "account": effect.account,
        }
    if isinstance(effect, TransferEffect):
        return {
            "type": "transfer",
            "from_account": effect.from_account,
            "to_account": effect.to_account,
            "asset": effect.asset,
            "amount": str(effect.amount),
        }
    if isinstance(effect, ArbLegEffect):
        return {
            "type": "arb_leg",
            "pool": effect.pool_id,
            "from_price": str(effect.from_price),
            "to_price": str(effect.to_price),
            "opportunity": effect.opportunity.id,
        }
    raise TypeError(f"unknown effect {type(effect).__name__}")


def to_canonical_object(scenario: Scenario) -> dict:
    pools = []
    for pool in sorted(scenario.pools, key=lambda p: p.id):
        if isinstance(pool, ConstantProductPool):
            pools.append(
                {
                    "id": pool.id,
                    "type": "constant_product",
                    "domain": pool.domain,
                    "asset_x": pool.asset_x,
                    "asset_y": pool.asset_y,
                    "reserve_x": str(pool.reserve_x),
                    "reserve_y": str(pool.reserve_y),
                    "fee_bps": pool.fee_bps,
                }
            )
        else:
            pools.append(
                {
                    "id": pool.id,
                    "type": "stylized_midpoint",
                    "domain": pool.domain,
                    "asset_x": pool.asset_x,
                    "asset_y": pool.asset_y,
                    "price": str(pool.price),
                }
            )

    actions = []
    for owner, action in sorted(scenario.player_actions, key=lambda pair: pair[1].id):
        obj: dict = {"id": action.id, "player": owner, "kind": action.kind}
        mode = _amount_mode_obj(action)
        if mode is not None:
            obj["amount"] = mode
        if action.kind == KIND_SWAP:
            obj["pool"] = action.pool_id
            obj["direction"] = action.direction
        elif action.kind == KIND_BRIDGE:
            obj["bridge"] = action.bridge.id
        elif action.kind == KIND_ARB:
            obj["arb"] = action.arb.id
        actions.append(obj)

    return {
        "schema_version": scenario.schema_version,
        "domains": [
            {"id": d.id, "native_asset": d.native_asset}
            for d in sorted(scenario.domains, key=lambda d: d.id)
        ],
        "assets": sorted(scenario.assets),
        "players": [
            {
                "id": p.id,
                "balances": [
                    {"domain": b.domain, "asset": b.asset, "amount": str(b.amount)}
                    for b in sorted(p.balances, key=lambda b: (b.domain, b.asset))
                ],
                "capabilities": [
                    {"domain": domain, "kinds": sorted(kinds)}
                    for domain, kinds in sorted(p.capabilities.items())
                ],
            }
            for p in sorted(scenario.players, key=lambda p: p.id)
        ],
        "pools": pools,
        "bridges": [
            {
                "id": b.id,
                "from_domain": b.from_domain,
                "to_domain": b.to_domain,
                "from_asset": b.from_asset,
                "to_asset": b.to_asset,
                "rate": format_fraction(b.rate),
                "flat_fee": str(b.flat_fee),
            }
            for b in sorted(scenario.bridges, key=lambda b: b.id)
        ],
        "mempool": [
            {"id": tx.id, "domain": tx.domain, "effect": _effect_obj(tx.effect)}
            for tx in sorted(scenario.mempool, key=lambda tx: tx.id)
        ],
        "opportunities": [
            {
                "id": o.id,
                "beneficiary": o.beneficiary,
                "declared_profit": str(o.declared_profit),
                "profit_asset": o.profit_asset,
                "profit_domain": o.profit_domain,
                "legs": sorted(o.leg_ids),
            }
            for o in sorted(scenario.opportunities, key=lambda o: o.id)
        ],
        "stylized_arbs": [
            {
                "id": a.id,
                "pool_a": a.pool_a,
                "pool_b": a.pool_b,
                "declared_profit": str(a.declared_profit),
                "profit_asset": a.profit_asset,
                "profit_domain": a.profit_domain,
            }
            for a in sorted(scenario.stylized_arbs, key=lambda a: a.id)
        ],
        "actions": actions,
        "prices": [
            {"from": src, "to": dst, "rate": format_fraction(rate)}
            for src, dst, rate in scenario.prices.entries()
            if src < dst
        ],
        "defaults": {
            "player": scenario.defaults.player,
            "base_domain": scenario.defaults.base_domain,
            "base_asset": scenario.defaults.base_asset,
            "max_sequence_length": scenario.defaults.max_sequence_length,
            "alpha": str(scenario.defaults.alpha),
            "action_domains": list(scenario.defaults.action_domains),
            "value_domains": list(scenario.defaults.value_domains),
        },
    }


def serialize_scenario(scenario: Scenario) -> str:
    """Canonical document: sorted keys, two-space indent, trailing newline."""
    return json.dumps(to_canonical_object(scenario), sort_keys=True, indent=2) + "\n"


# -- bundled scenarios ------------------------------------------------------------

BUNDLED_NAMES = (
    "appendix_b_4amm",
    "cp_arbitrage_small",
    "figure1_bridge",
    "figure1_bridge_discounted",
    "figure2_3domain",
    "section3_2amm",
    "separable_pair",
)


def bundled_path(name: str) -> Path:
    if name not in BUNDLED_NAMES:
        raise ParseError(f"no bundled scenario named {name!r}")
    return Path(str(resources.files("xdmev") / "scenarios" / f"{name}.json"))


def load_bundled(name: str) -> Scenario:
    return load_path(bundled_path(name))

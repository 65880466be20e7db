"""Bundled ground-site coordinate table."""

from __future__ import annotations

import json
from importlib import resources

from .geometry import GroundSite


def builtin_sites() -> dict[str, GroundSite]:
    text = resources.files("gscsim.data").joinpath("sites.json").read_text("utf-8")
    table = json.loads(text)
    return {
        name: GroundSite(name, entry["latitude_deg"], entry["longitude_deg"])
        for name, entry in table.items()
    }


def resolve_sites(entries: list) -> list[GroundSite]:
    """Accept site names (looked up in the bundled table) or explicit records."""
    known = builtin_sites()
    sites = []
    for entry in entries:
        if isinstance(entry, str):
            if entry not in known:
                raise KeyError(f"unknown ground site {entry!r}; give coordinates explicitly")
            sites.append(known[entry])
        else:
            sites.append(
                GroundSite(entry["name"], entry["latitude_deg"], entry["longitude_deg"])
            )
    return sites

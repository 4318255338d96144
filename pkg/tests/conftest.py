"""Shared fixtures: the hand-analyzed profiles used across the suite."""

import pytest

from randassign import Profile


@pytest.fixture
def paired_blocks_profile():
    """Two pairs of identical agents whose top choices split a/b."""
    return Profile.from_names(["abcd", "abcd", "badc", "badc"])


@pytest.fixture
def three_way_split_profile():
    """3x3 profile where PS and RSD are sd-incomparable."""
    return Profile.from_names(["acb", "abc", "bac"])


@pytest.fixture
def prefix_clash_profile():
    """4x4 profile where PS ld-dominates RSD but is sd-incomparable."""
    return Profile.from_names(["cabd", "acdb", "cbda", "acbd"])


@pytest.fixture
def duo_wide_profile():
    """Two agents, four objects: PS is sd-manipulable here."""
    return Profile.from_names(["abcd", "bcad"])


@pytest.fixture
def mirrored_trio_profile():
    """3x3 profile with PS = RSD that is still manipulable under PS."""
    return Profile.from_names(["bca", "cab", "bca"])

import pytest

from sdf_outage.errors import DomainError
from sdf_outage.fading import LinkStats
from sdf_outage.network import DecodeSet, NetworkConfig, PowerSplit


def test_power_split():
    split = PowerSplit.equal(2)
    assert split.fractions == pytest.approx((1 / 3, 1 / 3, 1 / 3))
    assert split.to_dict() == {"beta0": split.beta0, "beta_r": list(split.beta_r)}
    with pytest.raises(DomainError):
        PowerSplit(0.6, (0.3, 0.3))
    with pytest.raises(DomainError):
        PowerSplit(0.5, (-0.1, 0.2))


def test_decode_sets():
    subsets = list(DecodeSet.all_subsets(3))
    assert len(subsets) == 8
    assert subsets[0] == DecodeSet()
    assert len(set(subsets)) == 8
    assert 2 in DecodeSet(frozenset({2, 3}))
    with pytest.raises(DomainError):
        DecodeSet(frozenset({0}))
    with pytest.raises(DomainError):
        DecodeSet(frozenset({4})).validate(3)


def test_network_validation():
    link = LinkStats(1.0)
    base = dict(
        n=2, n_d=2, relays=2, code_rate=1.0, block_len=4, gamma0=3.0,
        sd=link, sr=(link, link), rd=(link, link)
    )
    NetworkConfig(**base)
    for key, value in (
        ("n", 0), ("block_len", 1.5), ("code_rate", 0.0), ("gamma0", -1.0),
        ("sr", (link,)), ("split", PowerSplit(0.5, (0.5,))),
        ("split", PowerSplit(0.0, (0.5, 0.5))), ("total_power", 0.0)
    ):
        with pytest.raises(DomainError):
            NetworkConfig(**{**base, key: value})


def test_snr_mapping(network_factory):
    cfg = network_factory(snr_db=20.0)
    assert cfg.total_power == pytest.approx(100.0)
    assert cfg.snr_unit == pytest.approx(100.0 / 2.0)
    assert cfg.rho_source == pytest.approx(50.0 / 3.0)
    assert cfg.rho_relay(2) == pytest.approx(50.0 / 3.0)


def test_perfect_csi_static(mobile_network):
    assert not mobile_network.is_perfect_static
    perfect = mobile_network.perfect_csi_static()
    assert perfect.is_perfect_static
    assert perfect.sd.avg_gain == mobile_network.sd.avg_gain
    split = PowerSplit(0.5, (0.25, 0.25))
    assert perfect.with_split(split).power_split == split

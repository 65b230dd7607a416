import copy
import json
import typing

import pytest

from sdf_outage.fading import LinkStats
from sdf_outage.network import NetworkConfig, PowerSplit


MOBILE_CORR = 0.9915

NETWORK_FACTORY_TYPE = typing.Callable[..., NetworkConfig]
DOCUMENT_FACTORY_TYPE = typing.Callable[..., typing.Dict[str, typing.Any]]
CONFIG_WRITER_TYPE = typing.Callable[[typing.Any], str]


def make_network(
    n: int = 2,
    n_d: int = 2,
    relays: int = 2,
    block_len: int = 15,
    gamma0: float = 3.0,
    avg_gain: float = 2.0,
    sd_gain: typing.Optional[float] = None,
    sr_gain: typing.Optional[float] = None,
    rd_gain: typing.Optional[float] = None,
    est_err_var: float = 0.0,
    tv_err_var: float = 0.0,
    corr: float = 1.0,
    snr_db: float = 10.0,
    split: typing.Optional[PowerSplit] = None
) -> NetworkConfig:
    def link(gain: typing.Optional[float]) -> LinkStats:
        return LinkStats(
            avg_gain if gain is None else gain,
            est_err_var=est_err_var,
            tv_err_var=tv_err_var,
            corr=corr
        )
    return NetworkConfig(
        n=n,
        n_d=n_d,
        relays=relays,
        code_rate=1.0,
        block_len=block_len,
        gamma0=gamma0,
        sd=link(sd_gain),
        sr=tuple(link(sr_gain) for _ in range(relays)),
        rd=tuple(link(rd_gain) for _ in range(relays)),
        split=split
    ).with_snr_db(snr_db)


@pytest.fixture
def network_factory() -> NETWORK_FACTORY_TYPE:
    return make_network


@pytest.fixture
def mobile_network() -> NetworkConfig:
    "Two relays, 2x2 antennas, 15 codewords, mobile nodes with CSI errors."
    return make_network(est_err_var=0.01, tv_err_var=0.10, corr=MOBILE_CORR)


@pytest.fixture
def perfect_network() -> NetworkConfig:
    return make_network()


MOBILE_DOCUMENT: typing.Dict[str, typing.Any] = {
    "network": {
        "n": 2,
        "n_d": 2,
        "relays": 2,
        "code_rate": 1,
        "block_len": 15,
        "rate_target": 1
    },
    "links": {
        "sd": {"avg_gain": 2, "est_err_var": 0.01, "tv_err_var": 0.1},
        "sr": {"avg_gain": 2, "est_err_var": 0.01, "tv_err_var": 0.1},
        "rd": {"avg_gain": 2, "est_err_var": 0.01, "tv_err_var": 0.1}
    },
    "mobility": {
        "carrier_hz": 5.9e9,
        "symbol_rate": 1e4,
        "speed": "32 mi/h"
    },
    "sweep": {
        "snr_db_start": 0,
        "snr_db_stop": 30,
        "snr_db_step": 2
    },
    "sim": {
        "trials": 20000,
        "seed": 2024,
        "mode": "gamma-draw",
        "workers": 1
    }
}


@pytest.fixture
def document_factory() -> DOCUMENT_FACTORY_TYPE:
    """
    Copy of the mobile two-relay document. Keyword arguments replace whole
    sections; ``perfect=True`` strips CSI errors and mobility.
    """
    def _factory(perfect: bool = False, **sections) -> typing.Dict[str, typing.Any]:
        document = copy.deepcopy(MOBILE_DOCUMENT)
        if perfect:
            del document["mobility"]
            for key in ("sd", "sr", "rd"):
                document["links"][key] = {"avg_gain": 2}
        for name, value in sections.items():
            if value is None:
                document.pop(name, None)
            else:
                document[name] = value
        return document
    return _factory


@pytest.fixture
def config_writer(tmp_path) -> CONFIG_WRITER_TYPE:
    "Write a document (or raw text) to a fresh file and return its path."
    counter = [0]

    def _writer(document: typing.Any) -> str:
        counter[0] += 1
        path = tmp_path / f'experiment-{counter[0]}.json'
        text = document if isinstance(document, str) else json.dumps(document, indent=2)
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _writer

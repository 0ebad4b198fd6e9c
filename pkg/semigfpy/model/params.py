import math
from typing import Any, Dict, List

from semigfpy.config import (FADING_MEAN_GB, FADING_MEAN_GF, NOISE_DBM,
                             P_GB_DBM, P_GF_DBM, PATHLOSS_EXP, RADIUS_M,
                             SIC_THRESHOLD)

# transmit SNR axes: the power of the user is set to noise_dbm + value
SNR_AXES = {
    'rho_gb_db': 'p_gb_dbm',
    'rho_gf_db': 'p_gf_dbm'
}


def dbm_to_mw(p_dbm: float) -> float:
    """Convert a power from dBm to linear milliwatts.

    Args:
        p_dbm (float): The power in dBm.

    Returns:
        float: The power in mW.
    """
    return 10 ** (p_dbm / 10)


class SystemParams:
    FIELDS = ['radius_m', 'pathloss_exp', 'p_gb_dbm', 'p_gf_dbm', 'noise_dbm',
              'fading_mean_gb', 'fading_mean_gf', 'sic_threshold']

    def __init__(self,
                 radius_m: float = RADIUS_M,
                 pathloss_exp: float = PATHLOSS_EXP,
                 p_gb_dbm: float = P_GB_DBM,
                 p_gf_dbm: float = P_GF_DBM,
                 noise_dbm: float = NOISE_DBM,
                 fading_mean_gb: float = FADING_MEAN_GB,
                 fading_mean_gf: float = FADING_MEAN_GF,
                 sic_threshold: float = SIC_THRESHOLD):
        """Create the physical constants of one scenario.

        User-facing powers are in dBm; every linear property is in mW.

        Args:
            radius_m (float, optional): The radius of the disc (m). Defaults to RADIUS_M.
            pathloss_exp (float, optional): The path-loss exponent. Defaults to PATHLOSS_EXP.
            p_gb_dbm (float, optional): The GB transmit power (dBm). Defaults to P_GB_DBM.
            p_gf_dbm (float, optional): The GF transmit power (dBm). Defaults to P_GF_DBM.
            noise_dbm (float, optional): The noise power (dBm). Defaults to NOISE_DBM.
            fading_mean_gb (float, optional): The mean GB fading power gain. Defaults to FADING_MEAN_GB.
            fading_mean_gf (float, optional): The mean GF fading power gain. Defaults to FADING_MEAN_GF.
            sic_threshold (float, optional): The GB SINR threshold for SIC success (linear). Defaults to SIC_THRESHOLD.

        Raises:
            ValueError: Raised if a value is out of its range.
        """
        self.radius_m = float(radius_m)
        self.pathloss_exp = float(pathloss_exp)
        self.p_gb_dbm = float(p_gb_dbm)
        self.p_gf_dbm = float(p_gf_dbm)
        self.noise_dbm = float(noise_dbm)
        self.fading_mean_gb = float(fading_mean_gb)
        self.fading_mean_gf = float(fading_mean_gf)
        self.sic_threshold = float(sic_threshold)
        self._check()

    def _check(self) -> None:
        for name in ['radius_m', 'pathloss_exp', 'fading_mean_gb', 'fading_mean_gf']:
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f'{name} must be a positive finite number, got {v}.')
        for name in ['p_gb_dbm', 'p_gf_dbm', 'noise_dbm']:
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f'{name} must be finite, got {v}.')
        # +inf is accepted: SIC never succeeds
        if not self.sic_threshold >= 0:
            raise ValueError(f'sic_threshold must be non-negative, got {self.sic_threshold}.')

    def __str__(self) -> str:
        return f'SystemParams({", ".join([f"{k}={getattr(self, k)}" for k in SystemParams.FIELDS])})'

    def __repr__(self) -> str:
        return str(self)

    def __eq__(self,
               other: 'SystemParams') -> bool:
        if isinstance(other, SystemParams):
            return self.to_json() == other.to_json()
        return False

    def __hash__(self) -> int:
        return hash(tuple(self.to_json().values()))

    @property
    def p_gb_mw(self) -> float:
        return dbm_to_mw(self.p_gb_dbm)

    @property
    def p_gf_mw(self) -> float:
        return dbm_to_mw(self.p_gf_dbm)

    @property
    def noise_mw(self) -> float:
        return dbm_to_mw(self.noise_dbm)

    @property
    def rho_gb_db(self) -> float:
        """The GB transmit SNR (dB), P_GB relative to the noise power."""
        return self.p_gb_dbm - self.noise_dbm

    @property
    def rho_gf_db(self) -> float:
        """The GF transmit SNR (dB), P_GF relative to the noise power."""
        return self.p_gf_dbm - self.noise_dbm

    def replace(self,
                **kwargs) -> 'SystemParams':
        """Get a copy with some fields changed.

        Transmit SNR axes (`rho_gb_db`, `rho_gf_db`) are accepted too and set the
        corresponding power relative to the (possibly also replaced) noise power.

        Raises:
            ValueError: Raised if a name is neither a field nor an SNR axis.

        Returns:
            SystemParams: The new parameters.
        """
        args = self.to_json()
        snrs = {}
        for k, v in kwargs.items():
            if k in SNR_AXES:
                snrs[SNR_AXES[k]] = v
            elif k in args:
                args[k] = v
            else:
                raise ValueError(f'Unknown parameter {k}; valid names are {", ".join(SystemParams.axes())}.')
        for k, v in snrs.items():
            args[k] = args['noise_dbm'] + v
        return SystemParams.from_json(args)

    @staticmethod
    def axes() -> List[str]:
        """Get the names a sweep can run over.

        Returns:
            List[str]: The field names and the transmit SNR axes.
        """
        return SystemParams.FIELDS + list(SNR_AXES.keys())

    def to_json(self) -> Dict[str, Any]:
        return {k: getattr(self, k) for k in SystemParams.FIELDS}

    @staticmethod
    def from_json(my_args: Dict[str, Any]) -> 'SystemParams':
        return SystemParams(**{k: my_args[k] for k in SystemParams.FIELDS})

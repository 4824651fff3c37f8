import os

from dotenv import load_dotenv

from drh.models.caps import ComputationCaps

load_dotenv()


def default_caps() -> ComputationCaps:
    """Limites padrão, ajustáveis por variáveis de ambiente (.env)."""
    return ComputationCaps(
        eps_cap=int(os.getenv("DRH_EPS_CAP", "2")),
        u_degree_cap=int(os.getenv("DRH_UDEG_CAP", "8")),
        t_degree_cap=int(os.getenv("DRH_TDEG_CAP", "3")),
        p_max=int(os.getenv("DRH_PMAX", "3")),
    )


def log_level() -> str:
    return os.getenv("DRH_LOG_LEVEL", "INFO").upper()

"""cornerlab - 无角集合工具箱"""

from .core.config import settings

__version__ = settings.app_version
__author__ = "cornerlab Team"
__description__ = settings.description

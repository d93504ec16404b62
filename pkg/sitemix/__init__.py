"""Initialize the package"""

__version__ = "0.1.0"
__title__ = "Site Mixedness"

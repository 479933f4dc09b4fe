"""
API routes for spectrum reports.
"""

from flask import Blueprint, jsonify, request
import logging

from src.eup_coulomb.exceptions import SpectrumError
from src.eup_coulomb.serializer import TOOL_NAME, TOOL_VERSION

from ..services.spectrum_service import SpectrumService

logger = logging.getLogger(__name__)

# Create Blueprint
api_bp = Blueprint('api', __name__)

spectrum_service = SpectrumService()


def _report_response(command):
    try:
        data = spectrum_service.build(command, request.args)
        return jsonify({
            'success': True,
            'data': data,
            'count': len(data['records'])
        })

    except (SpectrumError, ValueError) as e:
        logger.warning(f"Rejected {command} request: {e}")
        return jsonify({
            'success': False,
            'error': str(e)
        }), 400
    except Exception as e:
        logger.error(f"Error building {command} report: {e}")
        return jsonify({
            'success': False,
            'error': str(e)
        }), 500


@api_bp.route('/health', methods=['GET'])
def health():
    return jsonify({
        'success': True,
        'data': {'tool': TOOL_NAME, 'version': TOOL_VERSION}
    })


@api_bp.route('/spectrum', methods=['GET'])
def spectrum():
    """
    Closed-form level of one state.

    Query Parameters:
        - eq: kg or dirac
        - space: ds, ads or both
        - Z, N, l, j: charge and quantum numbers
        - lambda | sqrt-lambda-per-m | eta: deformation strength
        - units: natural or physical
    """
    return _report_response('spectrum')


@api_bp.route('/table', methods=['GET'])
def table():
    """Hydrogen-like Dirac levels with their EUP corrections."""
    return _report_response('table')


@api_bp.route('/scan', methods=['GET'])
def scan():
    """
    Levels over N or Z.

    Query Parameters:
        - scan-var: N or Z
        - n_max, z_min, z_max: scan range
        - etas: comma-separated deformation values
    """
    return _report_response('scan')


@api_bp.route('/wavefunction', methods=['GET'])
def wavefunction():
    return _report_response('wavefunction')
